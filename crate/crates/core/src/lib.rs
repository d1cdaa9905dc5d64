//! Possibilistic scoring of atomic OWL class axioms, ontology-based concept and
//! axiom similarity, and regression models that predict axiom scores from
//! similarity vectors.
//!
//! The pipeline runs bottom-up through the modules:
//!
//! 1. [`rdf_store`] parses RDF and indexes class membership and class axioms.
//! 2. [`scorer`] computes possibility, necessity and the acceptance/rejection
//!    index (ARI) of candidate axioms, and extracts labeled axiom sets.
//! 3. [`hierarchy`] builds the subsumption DAG and the concept similarity matrix.
//! 4. [`axiom_similarity`] lifts concept similarity to axiom pairs and encodes
//!    axioms as feature vectors.
//! 5. [`learner`] fits and evaluates regressors on those vectors.
//!
//! [`instance_baseline`] provides the instance-counting similarity used for
//! head-to-head comparison, and [`pipeline`] composes everything for the CLI.

pub mod axiom_similarity;
pub mod error;
pub mod hierarchy;
pub mod instance_baseline;
pub mod learner;
pub mod pipeline;
pub mod rdf_store;
pub mod scorer;
pub mod synthetic;
mod util;

pub use axiom_similarity::{Asf, AxiomSimilarityMatrix, FeatureVector, LabeledAxiomSet};
pub use error::{Error, ErrorKind};
pub use hierarchy::{ConceptSimilarityMatrix, Hierarchy};
pub use rdf_store::{Dataset, Iri, RdfFormat, Term, Triple};
pub use scorer::{Axiom, AxiomKind, NegationMode, ScoreReport};
