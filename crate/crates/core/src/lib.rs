//! Primitive random substitutions: exact transition kernels, mean and induced
//! mean matrices, Perron–Frobenius frequency measures on cylinder sets,
//! Monte-Carlo sampling of iterates, and entropy partial sums.

pub mod catalog;
pub mod checks;
pub mod cli;
pub mod config;
pub mod entropy;
pub mod error;
pub mod induced;
pub mod language;
pub mod limits;
pub mod matrix;
pub mod measure;
pub mod sampler;
pub mod spectral;
pub mod substitution;
pub mod words;

pub use error::{Error, Result, RuleViolation};
pub use limits::Limits;
pub use matrix::RationalMatrix;
pub use substitution::{
    is_expanding, is_primitive, iterate_distribution, kernel, mean_matrix, primitivity_exponent,
    validate_rule, Image, IterateDistribution, MeanMatrix, SubstitutionRule,
};
pub use words::{abelianise, count_occurrences, Alphabet, Letter, Word};
pub use induced::{induced_mean_matrix, InducedMeanMatrix};
pub use language::{collar, language_table, legal_words, CollaredWord, LanguageTable};
pub use measure::{unique_ergodicity_probe, ErgodicityVerdict, FrequencyMeasure};
pub use sampler::{empirical_frequency, gw_direction_estimate, length_tail, sample_iterate, SampleStats};
pub use spectral::{pf_eigenpair, PfEigenpair};
pub use entropy::{
    max_entropy_class_check, metric_entropy_partial, topological_entropy_partial, EntropySeries, Flavor,
};
