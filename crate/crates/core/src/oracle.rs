//! Brute-force reference solvers. Deliberately plain: these anchor every
//! correctness claim at small sizes, so they must stay obviously right.

use std::fmt;

use crate::dp::CutProfile;
use crate::graph::{sides_from_mask, Bisection, Cut, Graph, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Min,
    Max,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Min => write!(f, "min"),
            Objective::Max => write!(f, "max"),
        }
    }
}

pub const BISECTION_CAP: usize = 24;
pub const MAXCUT_CAP: usize = 24;
pub const PROFILE_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TooLarge {
    pub n: usize,
    pub cap: usize,
}

impl fmt::Display for TooLarge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vertices exceed the enumeration cap of {}",
            self.n, self.cap
        )
    }
}

impl std::error::Error for TooLarge {}

/// Key that orders assignments lexicographically by vertex with side A
/// before side B; used to break value ties deterministically.
fn lex_key(n: usize, mask: u32) -> u32 {
    debug_assert!(n >= 1 && n <= 32);
    (!mask & (u32::MAX >> (32 - n))).reverse_bits() >> (32 - n)
}

fn cut_of_mask(g: &Graph, mask: u32) -> Weight {
    g.edges()
        .iter()
        .filter(|e| (mask >> e.u ^ mask >> e.v) & 1 == 1)
        .map(|e| e.w)
        .sum()
}

fn better(obj: Objective, cand: (Weight, u32), cur: (Weight, u32)) -> bool {
    let value_wins = match obj {
        Objective::Max => cand.0 > cur.0,
        Objective::Min => cand.0 < cur.0,
    };
    value_wins || (cand.0 == cur.0 && cand.1 < cur.1)
}

/// Exact optimum over all balanced assignments, ties broken toward the
/// lexicographically smallest assignment.
pub fn brute_bisection(g: &Graph, obj: Objective) -> Result<(Weight, Bisection), TooLarge> {
    let n = g.n();
    if n > BISECTION_CAP {
        return Err(TooLarge {
            n,
            cap: BISECTION_CAP,
        });
    }
    if n == 0 {
        return Ok((
            0,
            Bisection {
                side: Vec::new(),
                value: 0,
            },
        ));
    }
    let lo = (n / 2) as u32;
    let hi = (n - n / 2) as u32;
    let mut best: Option<(Weight, u32, u32)> = None;
    for mask in 0u32..1 << n {
        let ones = mask.count_ones();
        if ones != lo && ones != hi {
            continue;
        }
        let value = cut_of_mask(g, mask);
        let key = lex_key(n, mask);
        if best.map_or(true, |(bv, bk, _)| better(obj, (value, key), (bv, bk))) {
            best = Some((value, key, mask));
        }
    }
    let (value, _, mask) = best.expect("some balanced assignment exists");
    let side = sides_from_mask(n, mask as u64);
    Ok((value, Bisection { side, value }))
}

/// Exact maximum cut over all assignments.
pub fn brute_maxcut(g: &Graph) -> Result<(Weight, Cut), TooLarge> {
    let n = g.n();
    if n > MAXCUT_CAP {
        return Err(TooLarge { n, cap: MAXCUT_CAP });
    }
    if n == 0 {
        return Ok((
            0,
            Cut {
                side: Vec::new(),
                value: 0,
            },
        ));
    }
    let mut best: Option<(Weight, u32, u32)> = None;
    for mask in 0u32..1 << n {
        let value = cut_of_mask(g, mask);
        let key = lex_key(n, mask);
        if best.map_or(true, |(bv, bk, _)| {
            better(Objective::Max, (value, key), (bv, bk))
        }) {
            best = Some((value, key, mask));
        }
    }
    let (value, _, mask) = best.unwrap();
    let side = sides_from_mask(n, mask as u64);
    Ok((value, Cut { side, value }))
}

/// Exact best cut value per side-A size.
pub fn brute_profile(g: &Graph) -> Result<CutProfile, TooLarge> {
    let n = g.n();
    if n > PROFILE_CAP {
        return Err(TooLarge {
            n,
            cap: PROFILE_CAP,
        });
    }
    let mut per: Vec<Option<Weight>> = vec![None; n + 1];
    for mask in 0u64..1 << n {
        let value = cut_of_mask(g, mask as u32);
        let d = mask.count_ones() as usize;
        if per[d].map_or(true, |cur| value > cur) {
            per[d] = Some(value);
        }
    }
    Ok(CutProfile { max_per_size: per })
}
