//! Instance generation, the general-position gate, end-to-end verification and scaling runs.

mod generate;
mod pipeline;
mod points;
mod report;

pub use generate::{
    generate_instance, resample_seed, BuiltinFamily, InstanceSpec, DENOMINATOR_BITS,
};
pub use pipeline::{
    check_all_pairs, decode_file_bytes, decode_sections, encode, encode_constraint,
    general_position_gate, prepare_constraint, prepare_family, Adjacency, ConstraintEncoding,
    Encoding, PairCheck, PreparedConstraint,
};
pub use points::{read_points, write_points};
pub use report::{
    fit_line, format_balance, gated_instance, run_roundtrip, run_scaling, verify_instance,
    ConstraintReport, RunParams, RunReport, ScalingReport, ScalingRow, TrivialReport,
};
