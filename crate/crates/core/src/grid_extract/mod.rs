//! Constructive pieces of the natural-grid argument: sweep splitting,
//! same-type triples, one-sided subsets, separator lines, matching graphs
//! with `K_{t,t}` search, slope buckets, and the composed extraction.

mod input;
mod matching;
mod one_sided;
mod partition;
mod pipeline;
mod same_type;
mod separator;
mod sweep;

pub use input::{format_redblue, parse_redblue, read_redblue, write_redblue, RedBlueInput};
pub use matching::{find_ktt, matching_graph, Ktt, MatchingEdge, MatchingGraph};
pub use one_sided::{frame_of, one_sided_subset, Side};
pub use partition::slope_bucket_partition;
pub use pipeline::{extract_natural_grid, Extraction, ExtractionReport, StageSizes, DEFAULT_CAPACITY};
pub use same_type::{same_type_triple, Polarity, SameTypeResult, EXHAUSTIVE_LIMIT};
pub use separator::{separates, separator_line, SlopeSign};
pub use sweep::{split_by_sweep, SweepSplit};
