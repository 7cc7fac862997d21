use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use super::config::SessionConfigFile;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundKind {
    Message,
    Check,
}

/// One protocol round as persisted, one JSON object per line. Field
/// elements are stored as their canonical indices and bases as basis codes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundRecord {
    pub v: u32,
    pub round: u64,
    pub kind: RoundKind,
    pub bit_sent: Option<u8>,
    pub lambda: Option<usize>,
    /// Alice's single basis choice, used for both pairs.
    pub b1: usize,
    pub c1: usize,
    pub c1p: usize,
    pub eve_basis: Option<usize>,
    /// Eve's outcomes on Bob's two particles.
    pub eve_outcome: Option<[usize; 2]>,
    pub decoded: Option<u8>,
    pub check_b2: Option<usize>,
    pub check_expected: Option<usize>,
    pub check_measured: Option<usize>,
    pub check_passed: Option<bool>,
}

impl RoundRecord {
    /// Message rounds carry a decoded bit, check rounds a pass flag.
    pub fn is_well_formed(&self) -> bool {
        match self.kind {
            RoundKind::Message => {
                self.bit_sent.is_some()
                    && self.lambda.is_some()
                    && self.decoded.is_some()
                    && self.check_passed.is_none()
            }
            RoundKind::Check => {
                self.check_passed.is_some()
                    && self.check_b2.is_some()
                    && self.check_expected.is_some()
                    && self.check_measured.is_some()
                    && self.decoded.is_none()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub v: u32,
    pub config: SessionConfigFile,
    pub rounds: usize,
    pub message_rounds: usize,
    pub check_rounds: usize,
    pub bit_errors: usize,
    pub bit_error_rate: Option<f64>,
    pub checks_passed: usize,
    pub check_pass_rate: Option<f64>,
    /// Pass rates below this flag eavesdropping.
    pub detection_threshold: Option<f64>,
    pub eavesdropping_detected: bool,
}

/// Lower edge of the no-eavesdropper acceptance band: `1 - 3σ_max` with
/// σ_max = sqrt(1/4 / checks), the largest binomial standard deviation for
/// that many checks.
pub fn detection_threshold(check_rounds: usize) -> Option<f64> {
    (check_rounds > 0).then(|| 1.0 - 3.0 * (0.25 / check_rounds as f64).sqrt())
}

impl Summary {
    pub fn from_records(config: SessionConfigFile, records: &[RoundRecord]) -> Summary {
        let messages: Vec<_> = records.iter().filter(|r| r.kind == RoundKind::Message).collect();
        let checks: Vec<_> = records.iter().filter(|r| r.kind == RoundKind::Check).collect();
        let bit_errors = messages.iter().filter(|r| r.decoded != r.bit_sent).count();
        let checks_passed = checks.iter().filter(|r| r.check_passed == Some(true)).count();
        let rate = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
        let check_pass_rate = rate(checks_passed, checks.len());
        let threshold = detection_threshold(checks.len());
        let eavesdropping_detected = match (check_pass_rate, threshold) {
            (Some(rate), Some(t)) => rate < t,
            _ => false,
        };
        Summary {
            v: SCHEMA_VERSION,
            config,
            rounds: records.len(),
            message_rounds: messages.len(),
            check_rounds: checks.len(),
            bit_errors,
            bit_error_rate: rate(bit_errors, messages.len()),
            checks_passed,
            check_pass_rate,
            detection_threshold: threshold,
            eavesdropping_detected,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub records: Vec<RoundRecord>,
    pub summary: Summary,
}

impl Transcript {
    /// True when the summary equals one recomputed from the records.
    pub fn is_self_consistent(&self) -> bool {
        Summary::from_records(self.summary.config.clone(), &self.records) == self.summary
            && self.records.iter().all(RoundRecord::is_well_formed)
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for record in &self.records {
            serde_json::to_writer(&mut out, record)?;
            out.write_all(b"\n")?;
        }
        out.flush()
    }

    pub fn write_summary<W: Write>(&self, mut out: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.summary)?;
        out.write_all(b"\n")?;
        out.flush()
    }
}

pub fn read_jsonl<R: BufRead>(input: R) -> io::Result<Vec<RoundRecord>> {
    input
        .lines()
        .filter(|line| line.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|line| {
            let line = line?;
            serde_json::from_str(&line).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
        })
        .collect()
}
