//! Evaluation measures for dynamic topic models.
//!
//! A dynamic topic model is a grid of top-word lists, one per topic and
//! timestamp ([`topics::DynamicTopics`]). This crate scores such a grid in
//! two directions:
//!
//! * **year-wise**, across the topics of one timestamp: NPMI coherence (TC),
//!   diversity (TD) and topic quality (TQ), in [`static_measures`];
//! * **temporal**, along each topic's timeline: temporal coherence (TTC),
//!   smoothness (TTS), temporal quality (TTQ) and the combined dynamic
//!   topic quality (DTQ), in [`temporal`].
//!
//! All probabilities come from sliding-window co-occurrence counts over a
//! reference corpus ([`corpus`]). [`perturb`] degrades a model in controlled
//! ways (shuffling, collapse, word intrusion) and [`correlation`] /
//! [`ratings`] relate the measures to intrusion levels and human ratings.
//!
//! ```
//! use dtm_eval::corpus::{count_cooccurrences, TimedCorpus};
//! use dtm_eval::temporal::temporal_report;
//! use dtm_eval::topics::DynamicTopics;
//!
//! let corpus = TimedCorpus::from_token_lists(vec![
//!     (1990, vec!["rules", "rule", "expert"]),
//!     (1991, vec!["rules", "rule", "group"]),
//!     (1991, vec!["image", "view", "object"]),
//! ])
//! .unwrap();
//! let stats = count_cooccurrences(&corpus, 10).unwrap();
//! let topics = DynamicTopics::from_grid(
//!     vec![1990, 1991],
//!     &[
//!         vec![vec!["rules", "rule"], vec!["rules", "group"]],
//!         vec![vec!["image", "view"], vec!["view", "object"]],
//!     ],
//! )
//! .unwrap();
//! let report = temporal_report(&stats, &topics, 2, 1e-12).unwrap();
//! assert_eq!(report.topics[0].tts, vec![0.5]);
//! ```

pub mod cli;
pub mod corpus;
pub mod correlation;
pub mod error;
pub mod numeric;
pub mod perturb;
pub mod ratings;
pub mod static_measures;
pub mod synthetic;
pub mod temporal;
pub mod topics;

pub use error::{Error, Result};
