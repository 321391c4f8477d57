//! Finitely atomic operator- and map-valued measures.

pub mod atomic;
pub mod choi;

pub use atomic::{
    AtomicMapMeasure, AtomicOperatorMeasure, MapAtom, OperatorAtom, ScalarAtomicMeasure,
};
pub use choi::ChoiMap;
