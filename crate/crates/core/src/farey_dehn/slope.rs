use num_integer::Integer;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// A slope `p/q` in lowest terms with `q > 0`, or `1/0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slope {
    p: i64,
    q: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SlopeError {
    #[error("0/0 is not a slope")]
    Zero,
    #[error("cannot parse slope `{0}`; expected p/q")]
    Syntax(String),
}

impl Slope {
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };

    pub fn new(p: i64, q: i64) -> Result<Slope, SlopeError> {
        if p == 0 && q == 0 {
            return Err(SlopeError::Zero);
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn p(self) -> i64 {
        self.p
    }

    pub fn q(self) -> i64 {
        self.q
    }

    pub fn is_infinite(self) -> bool {
        self.q == 0
    }

    /// `(a + c)/(b + d)`, normalized; `None` for `x = −y`.
    pub fn plus(self, other: Slope) -> Option<Slope> {
        Slope::new(self.p + other.p, self.q + other.q).ok()
    }

    pub fn minus(self, other: Slope) -> Option<Slope> {
        Slope::new(self.p - other.p, self.q - other.q).ok()
    }
}

/// `|ad − bc|` for slopes `a/b`, `c/d`.
pub fn intersection_number(a: Slope, b: Slope) -> u64 {
    (a.p as i128 * b.q as i128 - a.q as i128 * b.p as i128).unsigned_abs() as u64
}

impl Ord for Slope {
    /// Numeric order with `1/0` greatest.
    fn cmp(&self, other: &Slope) -> Ordering {
        match (self.q == 0, other.q == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => (self.p as i128 * other.q as i128).cmp(&(other.p as i128 * self.q as i128)),
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Slope) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = SlopeError;

    fn from_str(s: &str) -> Result<Slope, SlopeError> {
        let bad = || SlopeError::Syntax(s.to_string());
        let t = s.trim();
        let (a, b) = t.split_once('/').unwrap_or((t, "1"));
        let p = a.trim().parse::<i64>().map_err(|_| bad())?;
        let q = b.trim().parse::<i64>().map_err(|_| bad())?;
        Slope::new(p, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Slope {
        x.parse().unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(s("2/-4"), s("-1/2"));
        assert_eq!(s("-3/0"), Slope::INFINITY);
        assert_eq!(s("0/-5").to_string(), "0/1");
        assert_eq!(s("3").to_string(), "3/1");
        assert!("0/0".parse::<Slope>().is_err());
        assert!("a/b".parse::<Slope>().is_err());
    }

    #[test]
    fn intersection_numbers() {
        assert_eq!(intersection_number(s("3/1"), s("-1/1")), 4);
        assert_eq!(intersection_number(s("2/3"), s("2/3")), 0);
        assert_eq!(intersection_number(s("0/1"), s("1/0")), 1);
    }

    #[test]
    fn infinity_is_greatest() {
        let mut v = vec![s("1/0"), s("-7/1"), s("1/2"), s("3/1")];
        v.sort();
        assert_eq!(v, vec![s("-7/1"), s("1/2"), s("3/1"), s("1/0")]);
    }
}
