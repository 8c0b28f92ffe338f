//! Desk-scale fixtures for both case studies.

mod provenance;
mod traces;
mod tree;

pub use provenance::{
    apr_complete_account, apr_procedure_template, apr_ramping_gap_account, digital_twin_account,
    testing_process_account, testing_process_template,
};
pub use traces::{generate_synthetic_trace, lab_trace, FixtureError};
pub use tree::{
    generated_fixtures, ucd_sources, FixtureFile, APR_BREAKER_TEST, APR_SEED, APR_TEST, DISCONNECT_AT, LAB_NOISE,
    NOR_SEED, NOR_TEST, SYNTHETIC_CHANNELS, UCD_CHANNELS, UCD_CONTEXT, UCD_OPERATING_POINT, UCD_PN, UCD_SUITE, UCD_UN,
};
