//! Coset enumerations for the truncated sums.

use alloc::vec::Vec;

use num_integer::Integer;

use crate::elliptic::IntMatrix2;

/// Coprime `(c, d)` with `|c|, |d| <= height`, one per `+-` class: `c > 0`,
/// or `c = 0, d = 1`. Sorted by `(|c|, |d|, c, d)`.
pub fn coprime_pairs(height: u32) -> Vec<(i64, i64)> {
    let h = height as i64;
    let mut out = Vec::new();
    for c in 0..=h {
        for d in -h..=h {
            if c == 0 && d != 1 {
                continue;
            }
            if c.gcd(&d) == 1 {
                out.push((c, d));
            }
        }
    }
    out.sort_by_key(|&(c, d)| (c.abs(), d.abs(), c, d));
    out
}

/// Every coprime `(c, d)` with `|c|, |d| <= height`, both signs.
pub fn signed_coprime_pairs(height: u32) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for (c, d) in coprime_pairs(height) {
        out.push((c, d));
        out.push((-c, -d));
    }
    out.sort_by_key(|&(c, d)| (c.abs(), d.abs(), c, d));
    out
}

/// `(a, b)` with `a d - b c = 1` for coprime `(c, d)`.
pub fn complete_row(c: i64, d: i64) -> (i64, i64) {
    let e = d.extended_gcd(&c);
    // e.x * d + e.y * c = e.gcd = +-1
    let g = e.gcd;
    (e.x * g, -e.y * g)
}

/// Bottom half `(C D)` of a symplectic matrix, in the canonical (Hermite
/// normal form) representative of its `GL_2(Z)` left orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymPairRep {
    pub c: [[i64; 2]; 2],
    pub d: [[i64; 2]; 2],
}

impl SymPairRep {
    pub const IDENTITY: SymPairRep = SymPairRep { c: [[0, 0], [0, 0]], d: [[1, 0], [0, 1]] };

    fn rows(&self) -> [[i64; 4]; 2] {
        [
            [self.c[0][0], self.c[0][1], self.d[0][0], self.d[0][1]],
            [self.c[1][0], self.c[1][1], self.d[1][0], self.d[1][1]],
        ]
    }

    fn from_rows(rows: [[i64; 4]; 2]) -> Self {
        SymPairRep {
            c: [[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]],
            d: [[rows[0][2], rows[0][3]], [rows[1][2], rows[1][3]]],
        }
    }

    /// `C D^t = D C^t`.
    pub fn is_symmetric(&self) -> bool {
        let (c, d) = (&self.c, &self.d);
        c[0][0] * d[1][0] + c[0][1] * d[1][1] == c[1][0] * d[0][0] + c[1][1] * d[0][1]
    }

    /// The six 2x2 minors of `(C D)` have gcd 1.
    pub fn is_primitive(&self) -> bool {
        let r = self.rows();
        let mut g = 0i64;
        for i in 0..4 {
            for j in (i + 1)..4 {
                g = g.gcd(&(r[0][i] * r[1][j] - r[0][j] * r[1][i]));
            }
        }
        g == 1
    }

    pub fn max_entry(&self) -> i64 {
        self.rows().iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// Hermite normal form of `(C D)` under left multiplication by `GL_2(Z)`.
    /// Requires rank 2.
    pub fn canonical(&self) -> SymPairRep {
        let mut r = self.rows();
        let mut row = 0;
        for col in 0..4 {
            if row == 2 {
                break;
            }
            // Euclid on column `col` among rows row..2.
            if row == 0 {
                while r[1][col] != 0 {
                    let q = Integer::div_floor(&r[0][col], &r[1][col]);
                    for j in 0..4 {
                        r[0][j] -= q * r[1][j];
                    }
                    r.swap(0, 1);
                }
            }
            if r[row][col] == 0 {
                continue;
            }
            if r[row][col] < 0 {
                for x in r[row].iter_mut() {
                    *x = -*x;
                }
            }
            if row == 1 {
                let q = Integer::div_floor(&r[0][col], &r[1][col]);
                for j in 0..4 {
                    r[0][j] -= q * r[1][j];
                }
            }
            row += 1;
        }
        SymPairRep::from_rows(r)
    }

    /// Sort key giving the summation order.
    fn order_key(&self) -> (i64, [[i64; 4]; 2]) {
        (self.max_entry(), self.rows())
    }
}

/// One canonical representative per coset of `Gamma_{2,0} \ Sp_2(Z)` whose
/// canonical form has all entries bounded by `height`, in deterministic order.
///
/// Candidates are generated directly in Hermite normal form by pivot pattern;
/// the symmetry condition fixes one entry in the full-rank case.
pub fn sym_pair_reps(height: u32) -> Vec<SymPairRep> {
    let h = height as i64;
    let mut out = Vec::new();
    let mut push = |rows: [[i64; 4]; 2]| {
        let rep = SymPairRep::from_rows(rows);
        if rep.is_symmetric() && rep.is_primitive() {
            out.push(rep);
        }
    };

    // C invertible: C = (c1 c2; 0 c3), c1, c3 > 0, 0 <= c2 < c3.
    // Symmetry: c1 d21 + c2 d22 = c3 d12.
    for c1 in 1..=h {
        for c3 in 1..=h {
            for c2 in 0..c3 {
                for d11 in -h..=h {
                    for d21 in -h..=h {
                        for d22 in -h..=h {
                            let num = c1 * d21 + c2 * d22;
                            if num % c3 != 0 {
                                continue;
                            }
                            let d12 = num / c3;
                            if d12.abs() > h {
                                continue;
                            }
                            push([[c1, c2, d11, d12], [0, c3, d21, d22]]);
                        }
                    }
                }
            }
        }
    }

    // C of rank 1: rows (a, b, x, y) and (0, 0, e, f), symmetry a e + b f = 0.
    for a in 0..=h {
        for b in -h..=h {
            if a == 0 && b <= 0 {
                continue;
            }
            for e in 0..=h {
                for f in -h..=h {
                    if e == 0 && f <= 0 {
                        continue;
                    }
                    if a * e + b * f != 0 {
                        continue;
                    }
                    let (xs, ys) = if e > 0 { (0..e, -h..h + 1) } else { (-h..h + 1, 0..f) };
                    for x in xs {
                        for y in ys.clone() {
                            push([[a, b, x, y], [0, 0, e, f]]);
                        }
                    }
                }
            }
        }
    }

    out.push(SymPairRep::IDENTITY);
    out.sort_by_key(|r| r.order_key());
    out
}

/// Representatives of `Gamma \ Gamma diag(m, 1/m) Gamma`, written as
/// `(1/m) M` with `M = (a, b; 0, d)` primitive, `ad = m^2`, `0 <= b < d`.
/// Returns the integer matrices `M`.
pub fn diag_double_coset_reps(m: u64) -> Vec<IntMatrix2> {
    let l = m * m;
    let mut out = Vec::new();
    for a in 1..=l {
        if l % a != 0 {
            continue;
        }
        let d = l / a;
        for b in 0..d {
            if a.gcd(&b).gcd(&d) == 1 {
                out.push(IntMatrix2::new(a as i64, b as i64, 0, d as i64));
            }
        }
    }
    out
}
