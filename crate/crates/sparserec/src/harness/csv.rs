//! CSV persistence for trial records: fixed header, RFC-style quoting, LF
//! line endings, and write-to-temp-then-rename so a crash never leaves a
//! partial file.

use std::io::Write as _;
use std::path::Path;

use crate::error::Result;

use super::TrialRecord;

pub(crate) const CSV_HEADER: &str = "trial_id,m,n,s,seed,err_l1,err_l2,err_lq,sigma_s_l1,eps_used,objective,status,consistent,wall_time_ms";

fn quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Serializes records under the fixed header. `include_timings` controls
/// the `wall_time_ms` column: when false (the default for experiment
/// artifacts) it is written as 0 so outputs are byte-identical across runs
/// and thread counts; when true the measured value is recorded.
pub fn write_csv(records: &[TrialRecord], path: &Path, include_timings: bool) -> Result<()> {
    let mut body = String::with_capacity(64 * (records.len() + 1));
    body.push_str(CSV_HEADER);
    body.push('\n');
    for r in records {
        let consistent = match r.consistent {
            Some(true) => "true",
            Some(false) => "false",
            None => "",
        };
        let wall = if include_timings { r.wall_time_ms } else { 0.0 };
        let line = format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.trial_id,
            r.m,
            r.n,
            r.s,
            r.seed,
            r.err_l1,
            r.err_l2,
            r.err_lq,
            r.sigma_s_l1,
            r.eps_used,
            r.objective,
            quote(r.status.as_str()),
            consistent,
            wall,
        );
        body.push_str(&line);
        body.push('\n');
    }

    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}
