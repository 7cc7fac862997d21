//! Entangled states built from mutually unbiased bases over GF(p^n), and a
//! simulator for the key-distribution protocol they support.
//!
//! Layers, bottom up:
//!
//! - [`gf`]: finite-field arithmetic and the trace map.
//! - [`hilbert`]: dense state vectors, Born sampling, partial projection,
//!   diagonal phases, the swap test.
//! - [`mub`]: the d+1 bases `|1;b,c⟩` and their unbiasedness report.
//! - [`entangle`]: pair states `|2;b,c⟩`, one-sided measurement, the λ shift,
//!   the nondestructive joint-c measurement.
//! - [`phasespace`]: continuous labels and lines, discrete Wigner functions.
//! - [`protocol`]: Alice, Bob and Eve, transcripts and detection statistics.
//!
//! ```
//! use mubqkd::entangle::{entangled_mub, measure_first, PairLabel};
//! use mubqkd::gf::Field;
//! use mubqkd::mub::{mub_state, BasisId, MubLabel};
//! use rand::SeedableRng;
//!
//! let field = Field::new(5, 1)?;
//! let pair = entangled_mub(&field, &PairLabel::new(field.scalar(3), field.scalar(1)));
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let (c1, remote) = measure_first(&field, &pair, &BasisId::Quadratic(field.scalar(1)), &mut rng);
//! let expected = mub_state(&field, &MubLabel::quadratic(field.scalar(2), &field.scalar(1) - &c1));
//! assert!(remote.max_abs_diff(&expected)? < 1e-12);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod dump;
pub mod entangle;
pub mod gf;
pub mod hilbert;
pub mod mub;
pub mod phasespace;
pub mod protocol;
pub mod verify;
