pub mod converge;
pub mod limit;
pub mod peakon;
pub mod soliton;
pub mod verify;

use chlab_core::Real;

use crate::error::CliResult;
use crate::output::Staged;
use crate::Run;

/// Output format version recorded in every JSON report.
pub const REPORT_VERSION: u32 = 1;

pub fn cell(r: &Real) -> String {
    r.to_string()
}

/// Writes the staged files and lists them on stdout.
pub fn finish(run: &Run, staged: Staged) -> CliResult<()> {
    for path in staged.commit(&run.out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
