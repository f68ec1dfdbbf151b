//! JSON configurations of points and lines.
//!
//! Values are `"p/q"` strings (or integers); complex values are
//! `{"re": "p/q", "im": "p/q"}`. A configuration is complex as soon as any
//! value is written in the complex form.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{CLine, CPoint, RLine, RPoint};
use crate::error::{Error, Result};
use crate::scalar::ExactField;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Value {
    Int(i64),
    Text(String),
    Complex { re: Box<Value>, im: Box<Value> },
}

impl Value {
    fn is_complex(&self) -> bool {
        matches!(self, Value::Complex { .. })
    }

    fn real<F: ExactField>(&self) -> Result<F> {
        match self {
            Value::Int(x) => Ok(F::from_i64(*x)),
            Value::Text(t) => F::parse_exact(t),
            Value::Complex { .. } => Err(Error::input("complex value in a real context")),
        }
    }

    fn complex<F: ExactField>(&self) -> Result<Complex<F>> {
        match self {
            Value::Complex { re, im } => Ok(Complex::new(re.real()?, im.real()?)),
            other => Ok(Complex::new(other.real()?, F::zero())),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawConfig {
    #[serde(default)]
    points: Vec<Vec<Value>>,
    #[serde(default)]
    lines: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealConfig<F> {
    pub points: Vec<RPoint<F>>,
    pub lines: Vec<RLine<F>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexConfig<F> {
    pub points: Vec<CPoint<F>>,
    pub lines: Vec<CLine<F>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanarConfig<F> {
    Real(RealConfig<F>),
    Complex(ComplexConfig<F>),
}

fn arity<'a>(row: &'a [Value], n: usize, what: &str) -> Result<&'a [Value]> {
    if row.len() != n {
        return Err(Error::input(format!("{what} needs {n} coordinates, got {}", row.len())));
    }
    Ok(row)
}

impl<F: ExactField> PlanarConfig<F> {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| Error::input(format!("malformed configuration: {e}")))?;
        let complex = raw.points.iter().chain(&raw.lines).flatten().any(Value::is_complex);
        if complex {
            let points = raw
                .points
                .iter()
                .map(|r| {
                    let r = arity(r, 2, "point")?;
                    Ok(CPoint::new(r[0].complex()?, r[1].complex()?))
                })
                .collect::<Result<_>>()?;
            let lines = raw
                .lines
                .iter()
                .map(|r| {
                    let r = arity(r, 3, "line")?;
                    CLine::new(r[0].complex()?, r[1].complex()?, r[2].complex()?)
                })
                .collect::<Result<_>>()?;
            Ok(PlanarConfig::Complex(ComplexConfig { points, lines }))
        } else {
            let points = raw
                .points
                .iter()
                .map(|r| {
                    let r = arity(r, 2, "point")?;
                    Ok(RPoint::new(r[0].real()?, r[1].real()?))
                })
                .collect::<Result<_>>()?;
            let lines = raw
                .lines
                .iter()
                .map(|r| {
                    let r = arity(r, 3, "line")?;
                    RLine::new(r[0].real()?, r[1].real()?, r[2].real()?)
                })
                .collect::<Result<_>>()?;
            Ok(PlanarConfig::Real(RealConfig { points, lines }))
        }
    }

    pub fn to_json(&self) -> String {
        let text = |x: &F| Value::Text(x.to_string());
        let cx = |z: &Complex<F>| Value::Complex {
            re: Box::new(text(&z.re)),
            im: Box::new(text(&z.im)),
        };
        let raw = match self {
            PlanarConfig::Real(c) => RawConfig {
                points: c.points.iter().map(|p| vec![text(&p.x), text(&p.y)]).collect(),
                lines: c
                    .lines
                    .iter()
                    .map(|l| {
                        let (a, b, cc) = l.coefficients();
                        vec![text(a), text(b), text(cc)]
                    })
                    .collect(),
            },
            PlanarConfig::Complex(c) => RawConfig {
                points: c.points.iter().map(|p| vec![cx(&p.z), cx(&p.w)]).collect(),
                lines: c
                    .lines
                    .iter()
                    .map(|l| {
                        let (a, b, cc) = l.coefficients();
                        vec![cx(a), cx(b), cx(cc)]
                    })
                    .collect(),
            },
        };
        serde_json::to_string(&raw).expect("serializable")
    }
}
