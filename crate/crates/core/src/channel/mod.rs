//! One-way communication strategies and their correlation tables `p(b|x,y)`.
//!
//! Classical tables are exact rationals; Born-rule tables are doubles with a
//! declared tolerance. Strategies are validated when constructed.

mod correlation;
mod eval;
pub mod schema;
mod spaces;
mod strategy;

pub use correlation::{
    correlation_distance, correlation_distance_exact, fraction_string, ArithmeticMode, Correlation,
    Entries,
};
pub use eval::{eval_classical, eval_quantum, eval_quantum_exact, eval_shared, eval_strategy};
pub use schema::{MeasurementDoc, PreparationDoc, StrategyDoc};
pub use spaces::TaskSpaces;
pub use strategy::{
    ClassicalPureStrategy, Measurement, Povm, Preparation, QuantumStrategy, SharedStrategy,
    Strategy, WEIGHT_TOL,
};
