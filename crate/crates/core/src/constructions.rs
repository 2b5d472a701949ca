//! Explicit quower covers for the families of board orders where a closed
//! form is known, and the resulting bounds on `ξ(n)` and `ξ_D(n)`.
//!
//! Coordinates in the formulas below are 1-based, as in the usual drawings
//! of the board; they are shifted to residues on construction.

use crate::board::{is_cover, BoardCover, BoardVariant};
use crate::error::{invalid, Result};

/// `{(2i, n+2-2i) : i = 1..n/2}`, a full-board cover of size `n/2` for
/// `n ≡ 2 (mod 4)`.
pub fn cover_even_2mod4(n: u32) -> Result<BoardCover> {
    if n % 4 != 2 {
        return Err(invalid!("cover_even_2mod4 needs n ≡ 2 mod 4, got {n}"));
    }
    let centers: Vec<(u32, u32)> = (1..=n / 2).map(|i| (2 * i, n + 2 - 2 * i)).collect();
    BoardCover::from_one_based(n, BoardVariant::Full, &centers)
}

/// Punctured-board cover of size `N/2` for `N = 4n`: the anti-diagonal run
/// `A = {(2i, N+2-2i) : i = 1..n}`, its continuation
/// `B = {(2n+2j, 2n-2j) : j = 1..n-1}` and the single cell `C = {(N, 2n)}`.
pub fn cover_punctured_0mod4(big_n: u32) -> Result<BoardCover> {
    if big_n == 0 || !big_n.is_multiple_of(4) {
        return Err(invalid!(
            "cover_punctured_0mod4 needs N ≡ 0 mod 4, N ≥ 4, got {big_n}"
        ));
    }
    let n = big_n / 4;
    let mut centers: Vec<(u32, u32)> = (1..=n).map(|i| (2 * i, big_n + 2 - 2 * i)).collect();
    centers.extend((1..n).map(|j| (2 * n + 2 * j, 2 * n - 2 * j)));
    centers.push((big_n, 2 * n));
    BoardCover::from_one_based(big_n, BoardVariant::Punctured, &centers)
}

/// Two-center cover of `Z_3^2`, the base of the `3 | n` case.
pub fn base_cover_z3() -> BoardCover {
    BoardCover::from_one_based(3, BoardVariant::Full, &[(1, 2), (3, 1)]).expect("valid cells")
}

/// Full-board cover of size `⌊(2n+1)/3⌋` for odd `n ≥ 3`.
///
/// With `n = 3m + r`, `r ∈ {1, 2}`, the centers are the anti-diagonals of the
/// first two diagonal blocks, of orders `m+1` and `m`. For `r = 0` the two
/// center cover of `Z_3^2` is lifted by [`product_lift`] with `m = n/3`.
pub fn cover_odd_blocks(n: u32) -> Result<BoardCover> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(invalid!("cover_odd_blocks needs odd n ≥ 3, got {n}"));
    }
    let (m, r) = (n / 3, n % 3);
    if r == 0 {
        return product_lift(&base_cover_z3(), m);
    }
    let mut centers: Vec<(u32, u32)> = (1..=m + 1).map(|i| (i, m + 2 - i)).collect();
    centers.extend((1..=m).map(|j| (m + 1 + j, 2 * m + 2 - j)));
    BoardCover::from_one_based(n, BoardVariant::Full, &centers)
}

/// Lifts a full cover of `Z_n^2` to one of `Z_{mn}^2` by copying it into the
/// `m` anti-diagonal blocks: `(c1 + s·n, c2 + (m-1-s)·n)` for `s = 0..m`.
pub fn product_lift(base: &BoardCover, m: u32) -> Result<BoardCover> {
    let n = base.n();
    if n.is_multiple_of(2) || m.is_multiple_of(2) {
        return Err(invalid!("product_lift needs odd n and m, got n={n}, m={m}"));
    }
    if base.variant() != BoardVariant::Full {
        return Err(invalid!("product_lift needs a cover of the full board"));
    }
    let report = is_cover(base);
    if !report.covered {
        return Err(invalid!(
            "base misses {} cells of Z_{n}^2",
            report.uncovered.len()
        ));
    }
    let big = n
        .checked_mul(m)
        .filter(|&b| b <= u16::MAX as u32)
        .ok_or_else(|| invalid!("lifted board order {n}·{m} is too large"))?;
    let centers = (0..m).flat_map(|s| {
        base.centers()
            .iter()
            .map(move |c| crate::board::BoardPoint {
                a: c.a + s * n,
                b: c.b + (m - 1 - s) * n,
            })
    });
    BoardCover::new(big, BoardVariant::Full, centers)
}

/// Lower and upper bounds on `ξ(n)` (full) or `ξ_D(n)` (punctured).
pub fn known_bounds(n: u32, variant: BoardVariant) -> (u32, u32) {
    let odd = (n.div_ceil(2), (2 * n + 1) / 3);
    match variant {
        BoardVariant::Full => match n % 4 {
            2 => (n / 2, n / 2),
            0 => (1 + n / 2, 1 + n / 2),
            _ => odd,
        },
        BoardVariant::Punctured if n == 1 => (0, 0),
        BoardVariant::Punctured if n.is_multiple_of(2) => (n / 2, n / 2),
        BoardVariant::Punctured => odd,
    }
}

/// The construction that applies to `n` on `variant`, if any.
///
/// Punctured boards also accept the full-board constructions, since a full
/// cover restricts to a punctured one.
pub fn construct(n: u32, variant: BoardVariant) -> Result<BoardCover> {
    let cover = match (variant, n % 4) {
        (BoardVariant::Punctured, 0) if n > 0 => cover_punctured_0mod4(n),
        (_, 2) => cover_even_2mod4(n),
        (_, 1 | 3) if n >= 3 => cover_odd_blocks(n),
        _ => Err(invalid!(
            "no construction for n={n} on the {} board",
            variant.name()
        )),
    }?;
    Ok(cover.with_variant(variant))
}
