//! Theorem-level harnesses and the full verification report.

pub mod battery;
pub mod harness;
pub mod report;

pub use battery::{battery, constant_battery, standard_battery, Battery, BatteryKind, Member};
pub use harness::*;
pub use report::{run_full_report, Record, VerifyConfig, VerificationReport};
