//! Shared flag parsing and output plumbing. Every function that rejects
//! input returns `AlgebraError`, which the top level maps to exit code 2
//! with the error's stable kind string on stderr.

use fgl_core::cellular::LineClass;
use fgl_core::error::{AlgebraError, Result};
use fgl_core::fgl::FormalGroupLaw;
use fgl_core::ring::{BaseKind, Coeff, RingSpec};
use fgl_core::scalar::Scalar;
use fgl_core::twist::TwistSequence;

/// `int`, `rat`, or `lazard:M` (graded over the rationals with generators
/// `b_1..b_M`).
pub fn parse_ring(spec: &str) -> Result<RingSpec> {
    match spec {
        "int" => Ok(RingSpec::Integers),
        "rat" => Ok(RingSpec::Rationals),
        other => {
            if let Some(bound) = other.strip_prefix("lazard:") {
                let bound: u32 = bound
                    .parse()
                    .map_err(|_| AlgebraError::Parse(format!("bad lazard bound {:?}", bound)))?;
                Ok(RingSpec::Graded {
                    base: BaseKind::Rationals,
                    bound,
                })
            } else {
                Err(AlgebraError::Parse(format!(
                    "unknown ring {:?} (expected int, rat, or lazard:M)",
                    other
                )))
            }
        }
    }
}

/// Builds the law named by `--law` at the requested degree. The universal
/// law forces a graded ring (defaulting the generator bound to the
/// degree); the simple laws default to the rationals.
pub fn build_law(law: &str, ring: Option<&str>, degree: u32) -> Result<FormalGroupLaw> {
    match law {
        "additive" | "multiplicative" => {
            let ring = match ring {
                Some(spec) => parse_ring(spec)?,
                None => RingSpec::Rationals,
            };
            if law == "additive" {
                FormalGroupLaw::additive(ring, degree)
            } else {
                FormalGroupLaw::multiplicative(ring, degree)
            }
        }
        "universal" => {
            let bound = match ring {
                Some(spec) => match parse_ring(spec)? {
                    RingSpec::Graded { bound, .. } => bound,
                    other => {
                        return Err(AlgebraError::Domain(format!(
                            "the universal law needs a graded ring, got {:?}",
                            other
                        )))
                    }
                },
                None => degree,
            };
            FormalGroupLaw::universal(BaseKind::Rationals, bound, degree)
        }
        other => Err(AlgebraError::Parse(format!(
            "unknown law {:?} (expected additive, multiplicative, or universal)",
            other
        ))),
    }
}

/// `exp-log`, `identity`, or a comma list of rationals starting with the
/// required leading 1 (e.g. `1,1/2,-2/3`).
pub fn parse_tau(spec: &str, cap: u32) -> Result<TwistSequence> {
    match spec {
        "exp-log" => TwistSequence::exp_log(cap),
        "identity" => TwistSequence::identity(RingSpec::Rationals, cap),
        list => {
            let scalars: Vec<Scalar> = list
                .split(',')
                .map(|tok| parse_scalar(tok.trim()))
                .collect::<Result<_>>()?;
            let cap = scalars.len() as u32;
            TwistSequence::from_scalars(RingSpec::Rationals, cap, scalars)
        }
    }
}

/// A rational literal: `3`, `-7`, or `num/den`.
pub fn parse_scalar(tok: &str) -> Result<Scalar> {
    let parse_int = |s: &str| -> Result<i64> {
        s.trim()
            .parse()
            .map_err(|_| AlgebraError::Parse(format!("bad integer {:?}", s)))
    };
    match tok.split_once('/') {
        Some((num, den)) => Scalar::new(parse_int(num)?, parse_int(den)?),
        None => Ok(Scalar::from_int(parse_int(tok)?)),
    }
}

pub fn parse_i64_list(spec: &str) -> Result<Vec<i64>> {
    spec.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| AlgebraError::Parse(format!("bad integer {:?}", tok)))
        })
        .collect()
}

pub fn parse_line(spec: &str) -> Result<LineClass> {
    Ok(LineClass(parse_i64_list(spec)?))
}

/// A perturbation like `1,2` (bump by 1) or `1,2,-3/4`.
pub fn parse_perturbation(spec: &str) -> Result<(u32, u32, Scalar)> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 2 && parts.len() != 3 {
        return Err(AlgebraError::Parse(format!(
            "expected i,j or i,j,delta — got {:?}",
            spec
        )));
    }
    let i: u32 = parts[0]
        .trim()
        .parse()
        .map_err(|_| AlgebraError::Parse(format!("bad index {:?}", parts[0])))?;
    let j: u32 = parts[1]
        .trim()
        .parse()
        .map_err(|_| AlgebraError::Parse(format!("bad index {:?}", parts[1])))?;
    let delta = if parts.len() == 3 {
        parse_scalar(parts[2])?
    } else {
        Scalar::one()
    };
    Ok((i, j, delta))
}

/// A one-index perturbation like `2` or `2,1/3`.
pub fn parse_index_perturbation(spec: &str) -> Result<(u32, Scalar)> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.is_empty() || parts.len() > 2 {
        return Err(AlgebraError::Parse(format!(
            "expected k or k,delta — got {:?}",
            spec
        )));
    }
    let k: u32 = parts[0]
        .trim()
        .parse()
        .map_err(|_| AlgebraError::Parse(format!("bad index {:?}", parts[0])))?;
    let delta = if parts.len() == 2 {
        parse_scalar(parts[1])?
    } else {
        Scalar::one()
    };
    Ok((k, delta))
}

/// Lifts a rational bump into the law's coefficient ring.
pub fn delta_in(ring: &RingSpec, s: &Scalar) -> Result<Coeff> {
    ring.from_scalar(s.clone())
}

/// Prints the value to stdout: compact by default, indented with
/// `--pretty` (which carries no stability guarantee).
pub fn print_json(value: &serde_json::Value, pretty: bool) {
    let rendered = if pretty {
        serde_json::to_string_pretty(value).expect("serializable value")
    } else {
        serde_json::to_string(value).expect("serializable value")
    };
    println!("{}", rendered);
}

/// Reports a rejected input on stderr and yields the usage exit code.
pub fn reject(err: &AlgebraError) -> i32 {
    eprintln!("error[{}]: {}", err.kind(), err);
    2
}
