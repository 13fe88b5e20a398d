//! Fixtures shared by the engine benchmarks.

use icebox::{Registry, RowType, SystemSpec, WeightRegime};

/// A mixed unfused system of moderate size.
pub fn mixed_system() -> SystemSpec {
    let reg = Registry::standard(3, 2);
    let regime = WeightRegime::generic(&reg, 2);
    SystemSpec::unfused(vec![RowType::R, RowType::L, RowType::R], 2, vec![4, 2, 0], 3, regime).expect("valid system")
}

/// An all-right-moving crystal system.
pub fn crystal_system() -> SystemSpec {
    SystemSpec::crystal(vec![RowType::R; 4], vec![5, 3, 1, 0], None).expect("valid system")
}
