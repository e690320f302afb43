//! Continuous coefficient modules for `Z_p^×` and its subgroups.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fg_module::FgZpModule;
use crate::padic::{int_valuation, is_prime};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coefficient {
    /// `Z_p` with `a` acting by `a^j`.
    TwistedZp { j: i64 },
    /// `Z/p^k` with `a` acting by `a^j`.
    TwistedFinite { k: u32, j: i64 },
    /// `Z/m`, trivial action, `gcd(m, p) = 1`.
    TrivialCyclic { m: u64 },
    /// `Z/2^k`, trivial action, only at `p = 2`.
    TrivialZ2tor { k: u32 },
    Sum(Vec<Coefficient>),
}

/// One cyclic primary summand of a coefficient module with its twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub prime: u64,
    /// `Z_q` (free) or `Z/q^k`.
    pub module: FgZpModule,
    /// Weight `j` of the twist; trivial components use 0.
    pub weight: i64,
}

impl Component {
    pub fn is_p_primary(&self, p: u64) -> bool {
        self.prime == p
    }
}

impl Coefficient {
    pub fn twisted_zp(j: i64) -> Self {
        Coefficient::TwistedZp { j }
    }

    pub fn twisted_finite(k: u32, j: i64) -> Self {
        Coefficient::TwistedFinite { k, j }
    }

    /// `μ_{p−1}` for odd p, `{±1}` for p = 2, trivial action.
    pub fn mu(p: u64) -> Self {
        if p == 2 {
            Coefficient::TrivialZ2tor { k: 1 }
        } else {
            Coefficient::TrivialCyclic { m: p - 1 }
        }
    }

    /// `Z_p^×` with trivial action.
    pub fn units(p: u64) -> Self {
        Coefficient::Sum(vec![Self::mu(p), Coefficient::TwistedZp { j: 0 }])
    }

    /// Split into primary cyclic components, validating against `p`.
    pub fn components(&self, p: u64) -> Result<Vec<Component>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut out = Vec::new();
        self.push_components(p, &mut out)?;
        Ok(out)
    }

    fn push_components(&self, p: u64, out: &mut Vec<Component>) -> Result<()> {
        match *self {
            Coefficient::TwistedZp { j } => out.push(Component {
                prime: p,
                module: FgZpModule::free(p, 1),
                weight: j,
            }),
            Coefficient::TwistedFinite { k, j } => {
                if k == 0 {
                    return Err(Error::Parse("Z/p^0 is not a valid coefficient".into()));
                }
                out.push(Component {
                    prime: p,
                    module: FgZpModule::cyclic(p, k),
                    weight: j,
                })
            }
            Coefficient::TrivialCyclic { m } => {
                if m == 0 || m % p == 0 {
                    return Err(Error::Unsupported(format!("trivial Z/{m} needs gcd(m, {p}) = 1")));
                }
                for (q, k) in crate::fg_module::factor_int(m) {
                    out.push(Component {
                        prime: q,
                        module: FgZpModule::cyclic(q, k),
                        weight: 0,
                    });
                }
            }
            Coefficient::TrivialZ2tor { k } => {
                if p != 2 {
                    return Err(Error::Unsupported("TrivialZ2tor is only defined at p = 2".into()));
                }
                if k == 0 {
                    return Err(Error::Parse("Z/2^0 is not a valid coefficient".into()));
                }
                out.push(Component {
                    prime: 2,
                    module: FgZpModule::cyclic(2, k),
                    weight: 0,
                })
            }
            Coefficient::Sum(ref parts) => {
                for c in parts {
                    c.push_components(p, out)?;
                }
            }
        }
        Ok(())
    }

    /// Parse the compact syntax: `Zp(j)`, `Z/n(j)`, `Z/n`, `mu`, `units`, joined by `+`.
    pub fn parse(s: &str, p: u64) -> Result<Self> {
        let parts: Vec<&str> = s.split('+').map(str::trim).collect();
        if parts.len() > 1 {
            return parts
                .iter()
                .map(|t| Self::parse(t, p))
                .collect::<Result<Vec<_>>>()
                .map(Coefficient::Sum);
        }
        let t = parts[0];
        let bad = || Error::Parse(format!("cannot parse coefficient {t:?}"));
        match t {
            "mu" => return Ok(Self::mu(p)),
            "units" => return Ok(Self::units(p)),
            _ => {}
        }
        let (head, weight) = match t.find('(') {
            Some(i) => {
                let inner = t[i + 1..].strip_suffix(')').ok_or_else(bad)?;
                (&t[..i], Some(inner.trim().parse::<i64>().map_err(|_| bad())?))
            }
            None => (t, None),
        };
        if head == "Zp" {
            return Ok(Coefficient::TwistedZp { j: weight.unwrap_or(0) });
        }
        let n: u64 = head.strip_prefix("Z/").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if n < 2 {
            return Err(bad());
        }
        let k = int_valuation(p, n as i128).unwrap_or(0);
        let p_part = p.pow(k);
        let rest = n / p_part;
        if let Some(j) = weight {
            if rest != 1 {
                return Err(Error::Parse(format!("twisted Z/{n} needs a power of {p}")));
            }
            return Ok(Coefficient::TwistedFinite { k, j });
        }
        let mut out = Vec::new();
        if k > 0 {
            out.push(if p == 2 {
                Coefficient::TrivialZ2tor { k }
            } else {
                Coefficient::TwistedFinite { k, j: 0 }
            });
        }
        if rest > 1 {
            out.push(Coefficient::TrivialCyclic { m: rest });
        }
        Ok(if out.len() == 1 {
            out.pop().expect("one part")
        } else {
            Coefficient::Sum(out)
        })
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::TwistedZp { j } => write!(f, "Zp({j})"),
            Coefficient::TwistedFinite { k, j } => write!(f, "Z/p^{k}({j})"),
            Coefficient::TrivialCyclic { m } => write!(f, "Z/{m}"),
            Coefficient::TrivialZ2tor { k } => write!(f, "Z/{}", 1u64 << k),
            Coefficient::Sum(parts) => {
                let s: Vec<String> = parts.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", s.join(" + "))
            }
        }
    }
}
