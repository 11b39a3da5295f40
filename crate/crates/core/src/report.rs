//! JSON run reports with fixed keys and 17-significant-digit floats.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};

use crate::specfun::Params;
use crate::verdict::Verdict;

/// Overall outcome of a CLI run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Verified,
    Refuted,
    Inconclusive,
    NotApplicable,
    Diverged,
}

impl From<Verdict> for Outcome {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Verified => Outcome::Verified,
            Verdict::Refuted => Outcome::Refuted,
            Verdict::Inconclusive => Outcome::Inconclusive,
            Verdict::NotApplicable => Outcome::NotApplicable,
        }
    }
}

impl Outcome {
    /// Worst-first combination: any failure wins, NotApplicable only when
    /// nothing else was decided.
    pub fn combine(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
        let mut any_verified = false;
        let mut any = false;
        for o in outcomes {
            any = true;
            match o {
                Outcome::Diverged => return Outcome::Diverged,
                Outcome::Refuted => return Outcome::Refuted,
                Outcome::Inconclusive => return Outcome::Inconclusive,
                Outcome::Verified => any_verified = true,
                Outcome::NotApplicable => {}
            }
        }
        if any_verified || !any {
            Outcome::Verified
        } else {
            Outcome::NotApplicable
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Verified => 0,
            Outcome::Refuted | Outcome::Inconclusive | Outcome::Diverged => 1,
            Outcome::NotApplicable => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsSummary {
    pub n: u32,
    pub lambda: f64,
    pub p: f64,
}

impl From<&Params> for ParamsSummary {
    fn from(p: &Params) -> Self {
        Self {
            n: p.n(),
            lambda: p.lambda(),
            p: p.p(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSummary {
    pub rel_tol: f64,
    pub err_estimates: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub subcommand: String,
    pub params: ParamsSummary,
    pub inputs: Map<String, Value>,
    pub results: Vec<Value>,
    pub verdict: Outcome,
    pub tolerances: Map<String, Value>,
    pub quadrature: QuadratureSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

/// Pretty printing with every float written as `{:.16e}`, which carries 17
/// significant digits and round-trips exactly.
struct FullPrecision(PrettyFormatter<'static>);

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        let values: Vec<f64> = vec![0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 1.0];
        let text = to_json(&values).unwrap();
        assert!(text.contains("3.3333333333333331e-1"));
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        for (a, b) in values.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn outcome_combination() {
        use Outcome::*;
        assert_eq!(Outcome::combine([Verified, NotApplicable]), Verified);
        assert_eq!(Outcome::combine([NotApplicable, NotApplicable]), NotApplicable);
        assert_eq!(Outcome::combine([Verified, Inconclusive]), Inconclusive);
        assert_eq!(Outcome::combine([Refuted, Diverged]), Refuted);
        assert_eq!(NotApplicable.exit_code(), 3);
        assert_eq!(Diverged.exit_code(), 1);
    }
}
