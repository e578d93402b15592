//! Reference systems: frequency priors, taxonomy and embedding matching over
//! transcriptions, and a simulated-recogniser cascade.

mod asr;
mod cascade;
mod embeddings;
mod prior;
mod taxonomy;

pub use asr::{corpus_wer, edit_distance, simulate_asr_errors, word_error_rate};
pub use cascade::{text_match_scores, TextScorer};
pub use embeddings::WordEmbeddings;
pub use prior::{text_prior_scores, vision_tag_prior_scores, UnigramModel};
pub use taxonomy::{Taxonomy, ROOT_MARKER};
