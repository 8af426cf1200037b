//! Finite-scale constructions for equivariant embeddings of group actions
//! and injective observations of map families into cubes `[0,1]^r`.
//!
//! A compact space is modeled by a finite sample with a metric and declared
//! dimension metadata. The crate checks the dimension hypotheses, builds a
//! perturbation of a starting observable that makes the orbit map injective,
//! and emits a certificate that can be re-verified independently.

pub mod action;
pub mod certificate;
pub mod cover;
pub mod doubled;
pub mod error;
pub mod exact;
pub mod family;
pub mod fixtures;
pub mod hypothesis;
pub mod io;
pub mod observable;
pub mod oracle;
pub mod partition;
pub mod perturb;
pub mod pipeline;
pub mod separation;
pub mod space;
pub mod witness;

pub use action::{GroupAction, Perm};
pub use certificate::{verify_certificate, verify_equivariant, EmbeddingCertificate, OrbitTable};
pub use cover::{build_cover, verify_cover, Backend, ColoredCover};
pub use error::{Error, Result};
pub use family::MapFamily;
pub use hypothesis::{check_hypotheses_action, check_hypotheses_family, HypothesisReport};
pub use observable::Observable;
pub use partition::Partition;
pub use pipeline::{embed_equivariant, embed_family, margin, EmbedOptions};
pub use space::FiniteSpace;
