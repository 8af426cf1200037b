mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::replay::replay;
use menger_core::cover::cluster;
use menger_core::oracle::fixture_spaces;
use menger_core::perturb::{assign_values, perturb};
use menger_core::witness::{check_separation, find_witness, BipartiteInstance, Witness};
use menger_core::{
    build_cover, embed_family, verify_certificate, verify_cover, Backend, EmbedOptions, Error,
    MapFamily, Observable,
};

fn surjection(rng: &mut ChaCha8Rng, w: usize, v: usize) -> Vec<usize> {
    let mut f: Vec<usize> = (0..w).map(|k| if k < v { k } else { rng.gen_range(0..v) }).collect();
    f.shuffle(rng);
    f
}

fn majority(rng: &mut ChaCha8Rng, v: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..v).collect();
    all.shuffle(rng);
    let k = rng.gen_range(v / 2 + 1..=v);
    all.truncate(k);
    all
}

fn brute_diameter(s: &menger_core::FiniteSpace, c: &[usize]) -> f64 {
    let mut d: f64 = 0.0;
    for &a in c {
        for &b in c {
            d = d.max(s.distance(a, b));
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witnesses_satisfy_their_definition(seed in any::<u64>(), v1 in 1usize..=5, dv in 0usize..=4, extra in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v2 = v1.saturating_sub(dv).max(1);
        let w = v1 + extra;
        let f1 = surjection(&mut rng, w, v1);
        let f2 = surjection(&mut rng, w, v2);
        let (s1, s2) = (majority(&mut rng, v1), majority(&mut rng, v2));
        let inst = BipartiteInstance::new(v1, v2, f1.clone(), f2.clone(), &s1, &s2).unwrap();
        match find_witness(&inst).unwrap() {
            Witness::A(x) => prop_assert!(s1.contains(&f1[x]) && s2.contains(&f2[x])),
            Witness::B(x, y) => {
                prop_assert_eq!(f2[x], f2[y]);
                prop_assert_ne!(f1[x], f1[y]);
                prop_assert!(s1.contains(&f1[x]) && s1.contains(&f1[y]));
            }
        }
    }

    #[test]
    fn separation_element_separates(seed in any::<u64>(), v1 in 1usize..=5, extra in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v2 = rng.gen_range(1..=v1);
        let w = v1 + extra;
        let f1 = surjection(&mut rng, w, v1);
        let f2 = surjection(&mut rng, w, v2);
        let (s1, s2) = (majority(&mut rng, v1), majority(&mut rng, v2));
        let inst = BipartiteInstance::new(v1, v2, f1.clone(), f2.clone(), &s1, &s2).unwrap();
        let phi1: Vec<usize> = (0..v1).collect();
        let mut phi2: Vec<usize> = (0..v1 + 2).collect();
        phi2.shuffle(&mut rng);
        phi2.truncate(v2);
        let ok = (0..w).all(|x| !(s1.contains(&f1[x]) && s2.contains(&f2[x])) || phi1[f1[x]] != phi2[f2[x]]);
        prop_assume!(ok);
        let sep = check_separation(&inst, &phi1, &phi2).unwrap();
        prop_assert_ne!(phi1[f1[sep.w]], phi2[f2[sep.w]]);
    }

    #[test]
    fn covers_meet_their_contract(seed in any::<u64>(), bricks in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spaces = fixture_spaces();
        let (_, s) = &spaces[rng.gen_range(0..spaces.len())];
        let d = s.coords().map_or(0, |c| c.dim);
        let m = rng.gen_range(d + 1..=6);
        let backend = if bricks { Backend::Bricks } else { Backend::Cells };
        let top = if bricks { m - d } else { m };
        let mu = rng.gen_range(1..=top);
        let mut z: Vec<usize> = (0..s.n_points()).collect();
        z.shuffle(&mut rng);
        z.truncate(rng.gen_range(1..=s.n_points()));
        let all: Vec<usize> = (0..s.n_points()).collect();
        let eps = s.diameter(&all) * rng.gen_range(0.05..=1.0);
        let c = build_cover(s, &z, m, mu, eps, backend).unwrap();
        prop_assert!(verify_cover(&c, s).is_valid());
        prop_assert_eq!(c.families.len(), m);
        for &x in &z {
            prop_assert!(c.families.iter().filter(|f| f.iter().any(|set| set.contains(&x))).count() >= mu);
        }
        for fam in &c.families {
            for (i, a) in fam.iter().enumerate() {
                prop_assert!(brute_diameter(s, a) <= eps);
                for b in &fam[i + 1..] {
                    prop_assert!(a.iter().all(|x| !b.contains(x)));
                }
            }
        }
    }

    #[test]
    fn clusters_partition_their_input(seed in any::<u64>(), frac in 0.01f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spaces = fixture_spaces();
        let (_, s) = &spaces[rng.gen_range(0..spaces.len())];
        let mut z: Vec<usize> = (0..s.n_points()).collect();
        z.shuffle(&mut rng);
        z.truncate(rng.gen_range(1..=s.n_points()));
        let all: Vec<usize> = (0..s.n_points()).collect();
        let eps = s.diameter(&all) * frac;
        let cs = cluster(s, &z, eps);
        let mut flat: Vec<usize> = cs.iter().flatten().copied().collect();
        flat.sort_unstable();
        z.sort_unstable();
        prop_assert_eq!(flat, z);
        for c in &cs {
            prop_assert!(brute_diameter(s, c) <= eps);
        }
    }

    #[test]
    fn perturbation_satisfies_a_b_c(seed in any::<u64>(), r in 1usize..=3, eps in 0.001f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=12);
        let f = Observable::sample(n, r, seed);
        // per coordinate: random disjoint subsets whose values spread by at most eps/2
        let fams: Vec<Vec<Vec<usize>>> = (0..r)
            .map(|l| {
                let mut ys: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
                ys.sort_by(|&a, &b| f.get(a, l).total_cmp(&f.get(b, l)));
                let mut out: Vec<Vec<usize>> = Vec::new();
                for y in ys {
                    match out.last_mut() {
                        Some(c) if f.get(y, l) - f.get(c[0], l) <= eps / 2.0 && rng.gen_bool(0.6) => c.push(y),
                        _ => out.push(vec![y]),
                    }
                }
                out
            })
            .collect();
        let a = assign_values(&fams, &f, eps).unwrap();
        let p = perturb(&f, &a, eps).unwrap();
        let g = &p.observable;
        for y in 0..n {
            for l in 0..r {
                let d = num_rational::BigRational::from_float(g.get(y, l)).unwrap()
                    - num_rational::BigRational::from_float(f.get(y, l)).unwrap();
                let d = if d < num_rational::BigRational::from_integer(0.into()) { -d } else { d };
                prop_assert!(d <= num_rational::BigRational::from_float(eps).unwrap());
            }
        }
        for (l, fam) in fams.iter().enumerate() {
            for (i, c) in fam.iter().enumerate() {
                for c2 in &fam[i + 1..] {
                    prop_assert_ne!(g.get(c[0], l), g.get(c2[0], l));
                }
                prop_assert!(c.iter().all(|&y| g.get(y, l) == g.get(c[0], l)));
            }
        }
        for l1 in 0..r {
            for l2 in l1 + 1..r {
                for y in fams[l1].iter().flatten() {
                    for z in fams[l2].iter().flatten() {
                        prop_assert_ne!(g.get(*y, l1), g.get(*z, l2));
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn embeddings_certify_and_replay(seed in any::<u64>(), n in 3usize..=7, big_n in 1usize..=3, r in 2usize..=3, constant in any::<bool>(), bricks in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = menger_core::fixtures::circle(n);
        let maps: Vec<Vec<usize>> = (0..big_n)
            .map(|_| {
                let k = rng.gen_range(0..n);
                (0..n).map(|x| (x + k) % n).collect()
            })
            .collect();
        let labels = (0..big_n).map(|k| format!("g{k}")).collect();
        let fam = MapFamily::new(s.clone(), s, maps, labels).unwrap();
        let f0 = if constant {
            Observable::new(r, vec![vec![0.5; r]; n]).unwrap()
        } else {
            Observable::sample(n, r, seed)
        };
        let opts = EmbedOptions {
            backend: if bricks { Backend::Bricks } else { Backend::Cells },
            ..EmbedOptions::default()
        };
        let eps = 0.05;
        let cert = match embed_family(&fam, r, eps, &f0, &opts) {
            Err(Error::HypothesisFailed(_)) => return Ok(()),
            other => other.unwrap(),
        };
        prop_assert!(cert.margin.is_some_and(|m| m > 0.0));
        prop_assert!(cert.displacement <= eps);
        verify_certificate(&cert, &fam).unwrap();
        let rep = replay(&cert, &fam);
        prop_assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    }
}
