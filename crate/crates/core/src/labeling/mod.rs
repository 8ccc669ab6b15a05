//! Per-vertex labels: addresses, decision trees, the wire format and the decoder.

mod address;
mod codec;
mod stats;
mod tree;

pub use address::{assign_addresses, Address};
pub use codec::{
    decode, decode_oriented, deserialize_label, encode_labels, read_label_file, serialize_label,
    write_label_section, LabelHeader, VertexLabel, FLAG_COMPLEMENT, FLAG_STRICT, FORMAT_VERSION,
    MAGIC,
};
pub use stats::{
    alpha, closed_form_label_bound, closed_form_tree_bound, format_label_bound, format_tree_bound,
    label_stats, trivial_bound, LabelStats,
};
pub use tree::{build_label_tree, LabelTree};
