//! CSV dump of the component densities.

use std::io::Write;

use crate::error::Result;
use crate::grid::{Grid1D, SpinorField};

pub const PROFILE_HEADER: &str = "# sgedr profile v1";

/// Writes `z, p_up, p_down` rows, one per grid point, after a header comment
/// naming the snapshot.
pub fn write_profile_csv<W: Write>(out: &mut W, grid: &Grid1D, field: &SpinorField, snapshot: &str) -> Result<()> {
    writeln!(out, "{PROFILE_HEADER} {snapshot}")?;
    writeln!(out, "z,p_up,p_down")?;
    for j in 0..grid.n() {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e}",
            grid.z(j),
            field.up[j].norm_sqr(),
            field.down[j].norm_sqr()
        )?;
    }
    Ok(())
}
