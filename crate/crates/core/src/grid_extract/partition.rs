use crate::error::{Error, Result};
use crate::geom::Line;

/// Splits `lines` into `r` contiguous runs of the slope order (vertical
/// last), run sizes `⌊n/r⌋` or `⌈n/r⌉`. Returns indices into `lines`.
///
/// Only the size bound is provided; no crossing-number guarantee.
pub fn slope_bucket_partition(lines: &[Line], r: usize) -> Result<Vec<Vec<usize>>> {
    let n = lines.len();
    if r <= 1 || r >= n {
        return Err(Error::InvalidParams(format!("need 1 < r < |L|, got r = {r} with |L| = {n}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (lines[i].is_vertical(), lines[i].slope(), i));
    let (base, extra) = (n / r, n % r);
    let mut parts = Vec::with_capacity(r);
    let mut start = 0;
    for k in 0..r {
        let size = base + usize::from(k < extra);
        parts.push(order[start..start + size].to_vec());
        start += size;
    }
    Ok(parts)
}
