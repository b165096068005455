//! Computational checks on the distribution of factorials modulo a prime:
//! distinct-residue counts V(H,N) of the sequence n! (mod p), factorial
//! collisions m! = n! (mod p), root counts of the shifted-factorial family
//! f_n(t) = t(t+1)...(t+n-1) - 1 over F_p, interval and sieve lemma
//! verifiers, and permutation-group statistics (derangement proportions,
//! Burnside averaging, random partial products).

mod bits;
mod error;

pub mod families;
pub mod lemmas;
pub mod modarith;
pub mod permgroup;
pub mod polyfp;
pub mod residues;
pub mod scan;

pub use error::{Error, Result};
