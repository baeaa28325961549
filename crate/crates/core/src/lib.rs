//! Periodic continued fractions of Möbius images of quadratic irrationals,
//! computed with Raney transducers and checked against exact surd arithmetic.

pub mod bounds;
pub mod engine;
pub mod error;
pub mod lemmas;
pub mod matrices;
pub mod pipeline;
pub mod search;
pub mod surds;
pub mod transducer;
pub mod verify;
pub mod words;

pub use engine::{ClosedWalk, Engine};
pub use error::{Error, Result};
pub use matrices::Mat2;
pub use surds::{PeriodicCF, QuadraticSurd};
pub use transducer::{build_transducer, Transducer, TransducerEdge};
pub use words::{LRWord, Letter};
