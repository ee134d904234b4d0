//! Learning LTLf formulas that separate positive from negative finite traces.
//!
//! Formulas are enumerated by size with bitwise evaluation over all traces at
//! once, keeping one formula per observed behaviour. When no small formula
//! separates the sample, the enumerated formulas become base sets of a
//! Boolean Set Cover instance solved by beam search under divide and conquer.
//!
//! ```
//! use ltlf_learn::pipeline::{learn, LearnerConfig, Status};
//! use ltlf_learn::trace::parse_sample;
//!
//! // Positives aabaa and baaa, negatives abab and aab, over propositions a, b.
//! let text = "\
//! 1,0;1,0;0,1;1,0;1,0
//! 0,1;1,0;1,0;1,0
//! ---
//! 1,0;0,1;1,0;0,1
//! 1,0;1,0;0,1
//! ---
//! a,b
//! ";
//! let sample = parse_sample(text).unwrap();
//! let r = learn(&sample, &LearnerConfig::default()).unwrap();
//! assert_eq!(r.status, Status::Solved);
//! assert_eq!(r.size(), Some(3));
//! ```

pub mod benchgen;
pub mod bits;
pub mod bitwise;
pub mod boolset;
pub mod cli;
pub mod enumerator;
pub mod ltl;
pub mod pipeline;
pub mod trace;
