//! A naive evaluation of every `g_i(x) = g_j(x')` equality, compared with
//! induced partitions, compatible subsets and the doubled family.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use menger_core::doubled::DoubledFamily;
use menger_core::fixtures;
use menger_core::partition::{all_partitions, compatible_subset, induced_partition, Partition};
use menger_core::MapFamily;

/// Block id of each label: the least label it shares a value with.
fn naive_labels(values: &[usize]) -> Vec<usize> {
    (0..values.len())
        .map(|k| (0..=k).find(|&j| values[j] == values[k]).unwrap())
        .collect()
}

fn labels_of(p: &Partition) -> Vec<usize> {
    (0..p.ground_size())
        .map(|k| p.blocks()[p.block_of(k)][0])
        .collect()
}

fn family(n: usize, m: usize, maps: Vec<Vec<usize>>) -> MapFamily {
    let labels = (0..maps.len()).map(|k| format!("g{k}")).collect();
    MapFamily::new(fixtures::path(n), fixtures::path(m), maps, labels).unwrap()
}

/// Number of disagreements between the library and the naive evaluation.
pub fn discrepancies(fam: &MapFamily, maps: &[Vec<usize>]) -> usize {
    let n = maps[0].len();
    let big_n = maps.len();
    let mut bad = 0;
    let naive_at = |x: usize| naive_labels(&maps.iter().map(|g| g[x]).collect::<Vec<_>>());
    for x in 0..n {
        if labels_of(&induced_partition(fam, x).unwrap()) != naive_at(x) {
            bad += 1;
        }
    }
    let all: Vec<usize> = (0..n).collect();
    for p in all_partitions(big_n) {
        let want: Vec<usize> = all.iter().copied().filter(|&x| naive_at(x) == labels_of(&p)).collect();
        if compatible_subset(fam, &all, &p).unwrap() != want {
            bad += 1;
        }
    }
    let df = DoubledFamily::new(fam.clone());
    for x1 in 0..n {
        for x2 in 0..n {
            if x1 == x2 {
                continue;
            }
            let values: Vec<usize> = (0..2 * big_n)
                .map(|k| maps[k / 2][if k % 2 == 0 { x1 } else { x2 }])
                .collect();
            if labels_of(&df.induced_partition((x1, x2)).unwrap()) != naive_labels(&values) {
                bad += 1;
            }
        }
    }
    bad
}

/// All injective maps `[n] → [m]`.
fn injections(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for y in 0..m {
            if !cur.contains(&y) {
                cur.push(y);
                rec(n, m, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, m, &mut Vec::new(), &mut out);
    out
}

fn tuples(items: &[Vec<usize>], k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                items.iter().map(move |g| {
                    let mut t = t.clone();
                    t.push(g.clone());
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Sweep {
    pub families: usize,
    pub discrepancies: usize,
}

/// Every family of `N ≤ 3` injections on up to 3 points, plus `N ≤ 2` on 4.
pub fn exhaustive_sweep() -> Sweep {
    let mut out = Sweep::default();
    for (n, m, max_n) in [(1, 3, 3), (2, 3, 3), (3, 3, 3), (2, 4, 3), (3, 4, 3), (4, 4, 2)] {
        let inj = injections(n, m);
        for big_n in 1..=max_n {
            for maps in tuples(&inj, big_n) {
                out.discrepancies += discrepancies(&family(n, m, maps.clone()), &maps);
                out.families += 1;
            }
        }
    }
    out
}

/// Random families of `N ≤ 3` injections from up to 8 points.
pub fn random_sweep(seed: u64, count: usize) -> Sweep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Sweep::default();
    for _ in 0..count {
        let n = rng.gen_range(2..=8);
        let m = rng.gen_range(n..=n + 2);
        let big_n = rng.gen_range(1..=3);
        let maps: Vec<Vec<usize>> = (0..big_n)
            .map(|_| {
                let mut ys: Vec<usize> = (0..m).collect();
                ys.shuffle(&mut rng);
                ys.truncate(n);
                ys
            })
            .collect();
        out.discrepancies += discrepancies(&family(n, m, maps.clone()), &maps);
        out.families += 1;
    }
    out
}
