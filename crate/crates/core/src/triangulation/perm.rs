use std::fmt;

/// A permutation of the vertex labels {0, 1, 2, 3}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub [u8; 4]);

impl Perm {
    pub const IDENTITY: Perm = Perm([0, 1, 2, 3]);

    /// Relabelling that sends a-edges to b-edges, b to c and c to a.
    pub const CYCLE_ABC: Perm = Perm([0, 2, 3, 1]);

    pub fn new(images: [u8; 4]) -> Option<Perm> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm(images))
    }

    #[inline]
    pub fn apply(self, v: u8) -> u8 {
        self.0[v as usize]
    }

    pub fn inverse(self) -> Perm {
        let mut out = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u8;
        }
        Perm(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm) -> Perm {
        let mut out = [0u8; 4];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.apply(other.apply(i as u8));
        }
        Perm(out)
    }

    pub fn is_odd(self) -> bool {
        let p = self.0;
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }

    /// All twelve even permutations, in lexicographic order.
    pub fn even_perms() -> Vec<Perm> {
        all_perms().into_iter().filter(|p| !p.is_odd()).collect()
    }
}

pub fn all_perms() -> Vec<Perm> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    if let Some(p) = Perm::new([a, b, c, d]) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// Vertices of the face opposite `u`, in increasing order.
pub fn face_vertices(u: u8) -> [u8; 3] {
    let mut out = [0u8; 3];
    let mut i = 0;
    for v in 0..4u8 {
        if v != u {
            out[i] = v;
            i += 1;
        }
    }
    out
}

/// Whether (a, b, c, d) is an even arrangement of 0..4.
pub fn is_even_arrangement(a: u8, b: u8, c: u8, d: u8) -> bool {
    Perm::new([a, b, c, d]).map(|p| !p.is_odd()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_compose() {
        for p in all_perms() {
            assert_eq!(p.compose(p.inverse()), Perm::IDENTITY);
            assert_eq!(p.inverse().compose(p), Perm::IDENTITY);
        }
    }

    #[test]
    fn parity_counts() {
        assert_eq!(Perm::even_perms().len(), 12);
        assert!(Perm([0, 2, 1, 3]).is_odd());
        assert!(!Perm::CYCLE_ABC.is_odd());
    }
}
