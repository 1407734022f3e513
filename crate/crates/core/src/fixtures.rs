//! Worked examples used throughout the test-suite and shipped under `fixtures/`.
//!
//! Examples originally stated on `{1, …, n}` are relabelled to `0..n` by subtracting one.

use crate::brace::{self, FiniteSkewBrace, Group};
use crate::perm::Perm;
use crate::solution::Solution;

fn from_maps(
    n: usize,
    lam: impl Fn(usize, usize) -> usize,
    rho: impl Fn(usize, usize) -> usize,
    name: &str,
) -> Solution {
    let lt = (0..n).map(|x| (0..n).map(|y| lam(x, y)).collect()).collect();
    let rt = (0..n).map(|y| (0..n).map(|x| rho(y, x)).collect()).collect();
    Solution::new(lt, rt).expect("fixture is a solution").with_name(name)
}

fn from_perms(lam: &[Perm], rho: &[Perm], name: &str) -> Solution {
    let n = lam.len();
    from_maps(n, |x, y| lam[x].apply(y), |y, x| rho[y].apply(x), name)
}

/// `r(x, y) = (σ(y), τ(x))` with σ = (0 1), τ = (2 3).
pub fn lyubashenko() -> Solution {
    let s = Solution::lyubashenko(&Perm::from_cycles(4, &[&[0, 1]]), &Perm::from_cycles(4, &[&[2, 3]]))
        .expect("commuting pair");
    s.with_name("lyubashenko")
}

/// `X = ℤ/3`, `r(x, y) = (−y, x − y)`.
pub fn z3() -> Solution {
    from_maps(3, |_, y| (3 - y) % 3, |y, x| (x + 3 - y) % 3, "z3")
}

/// `X = ℤ/4`, `r(x, y) = (−y, x + 2y)`.
pub fn z4() -> Solution {
    from_maps(4, |_, y| (4 - y) % 4, |y, x| (x + 2 * y) % 4, "z4")
}

/// λ₀ = λ₁ = ρ₀ = (2 3), λ₂ = (1 3), λ₃ = (1 2), other ρ trivial.
pub fn nc_example() -> Solution {
    let t = Perm::from_cycles(4, &[&[2, 3]]);
    let id = Perm::identity(4);
    let lam = [t.clone(), t.clone(), Perm::from_cycles(4, &[&[1, 3]]), Perm::from_cycles(4, &[&[1, 2]])];
    let rho = [t, id.clone(), id.clone(), id];
    from_perms(&lam, &rho, "nc_example")
}

/// λ₀ = λ₁ = ρ₀ = (2 3), all other λ and ρ trivial.
pub fn nonnilpotent() -> Solution {
    let t = Perm::from_cycles(4, &[&[2, 3]]);
    let id = Perm::identity(4);
    let lam = [t.clone(), t.clone(), id.clone(), id.clone()];
    let rho = [t, id.clone(), id.clone(), id];
    from_perms(&lam, &rho, "nonnilpotent")
}

/// `r(x, y) = (σ_x(y), x)` with σ₀ = σ₁ = (2 3) and σ₂ = σ₃ = (0 1).
pub fn mpl2() -> Solution {
    let a = Perm::from_cycles(4, &[&[2, 3]]);
    let b = Perm::from_cycles(4, &[&[0, 1]]);
    let sigma = [a.clone(), a, b.clone(), b];
    from_maps(4, |x, y| sigma[x].apply(y), |_, x| x, "mpl2")
}

/// Elements of S₃ as one-line permutations of {0,1,2} in lexicographic order.
pub fn s3_elements() -> Vec<Perm> {
    let mut v = vec![
        Perm(vec![0, 1, 2]),
        Perm(vec![0, 2, 1]),
        Perm(vec![1, 0, 2]),
        Perm(vec![1, 2, 0]),
        Perm(vec![2, 0, 1]),
        Perm(vec![2, 1, 0]),
    ];
    v.sort();
    v
}

/// `X = S₃`, `r(x, y) = (x y⁻¹ x⁻¹, x y²)` with the product `xy = x ∘ y`.
pub fn s3() -> Solution {
    let el = s3_elements();
    let idx = |p: &Perm| el.iter().position(|q| q == p).expect("closed");
    from_maps(
        6,
        |x, y| idx(&el[x].compose(&el[y].inverse()).compose(&el[x].inverse())),
        |y, x| idx(&el[x].compose(&el[y]).compose(&el[y])),
        "s3",
    )
}

/// `X = ℤ/n`, `r(x, y) = (y + 1, x + 1)`.
pub fn perm(n: usize) -> Solution {
    from_maps(n, |_, y| (y + 1) % n, |_, x| (x + 1) % n, &format!("perm{n}"))
}

/// Every solution fixture (brace solutions excluded).
pub fn all_solutions() -> Vec<Solution> {
    vec![lyubashenko(), z3(), z4(), nc_example(), nonnilpotent(), mpl2(), s3(), perm(3), perm(4)]
}

/// `(ℤ/2)⁴ ⋊ (ℤ/2)²` with both factors trivial braces; `(1,0)` swaps the first two coordinates and
/// `(0,1)` the last two.
///
/// An element `(a, c)` has index `a + 16c`, where `a` and `c` are read as bit vectors with the first
/// coordinate in the lowest bit.
pub fn brace_semidirect() -> FiniteSkewBrace {
    let a = FiniteSkewBrace::trivial(&Group::elementary_abelian_2(4));
    let c = FiniteSkewBrace::trivial(&Group::elementary_abelian_2(2));
    let swap = |i: u32, j: u32| {
        Perm(
            (0..16usize)
                .map(|v| {
                    let bi = (v >> i) & 1;
                    let bj = (v >> j) & 1;
                    (v & !(1 << i) & !(1 << j)) | (bj << i) | (bi << j)
                })
                .collect(),
        )
    };
    let s12 = swap(0, 1);
    let s34 = swap(2, 3);
    let alpha = vec![Perm::identity(16), s12.clone(), s34.clone(), s12.compose(&s34)];
    brace::semidirect(&a, &c, &alpha).expect("valid action")
}

/// `Hol((ℤ/2)²)`; element `((a, b), f)` has index `(a + 2b) + 4·i` where `f` is the `i`-th automorphism in
/// lexicographic one-line order (identity first).
pub fn holomorph() -> FiniteSkewBrace {
    brace::holomorph(&FiniteSkewBrace::trivial(&Group::elementary_abelian_2(2)))
}
