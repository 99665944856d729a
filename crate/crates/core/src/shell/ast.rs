use std::fmt;

use num_rational::BigRational;
use num_traits::One;

/// Exponent `num/den` with `den ∈ {1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exponent {
    pub num: i64,
    pub den: i64,
}

impl Exponent {
    pub fn int(k: i64) -> Self {
        Exponent { num: k, den: 1 }
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}/{})", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Non-negative rational literal.
    Num(BigRational),
    Q,
    Omega,
    X(i64),
    D(i64),
    Db(i64),
    /// `Λ^{1/2}`.
    L,
    /// Terms with their signs; `leading` records an explicit sign on the first.
    Sum { leading: Option<Sign>, terms: Vec<(Sign, Expr)> },
    Product(Vec<Expr>),
    Pow(Box<Expr>, Exponent),
    Group(Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Expr::Q => f.write_str("q"),
            Expr::Omega => f.write_str("omega"),
            Expr::X(i) => write!(f, "x[{i}]"),
            Expr::D(i) => write!(f, "d[{i}]"),
            Expr::Db(i) => write!(f, "db[{i}]"),
            Expr::L => f.write_str("L"),
            Expr::Sum { leading, terms } => {
                for (k, (s, t)) in terms.iter().enumerate() {
                    if k == 0 {
                        if let Some(l) = leading {
                            f.write_str(l.as_str())?;
                        }
                    } else {
                        write!(f, " {} ", s.as_str())?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Expr::Product(fs) => {
                for (k, x) in fs.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" * ")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Expr::Pow(b, e) => write!(f, "{b}^{e}"),
            Expr::Group(e) => write!(f, "({e})"),
        }
    }
}
