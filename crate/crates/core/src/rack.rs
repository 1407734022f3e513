//! Racks and quandles, their solutions, and the description of abelian racks by orbit data.

use serde::{Deserialize, Serialize};

use crate::perm::{ClosureCapExceeded, Perm, PermGroup};
use crate::solution::Solution;

/// A rack `(X, ◁)` with `op[x][y] = x ◁ y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rack {
    op: Vec<Vec<usize>>,
    quandle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[serde(tag = "error")]
pub enum RackError {
    #[error("malformed input: {detail}")]
    Shape { detail: String },
    #[error("(x◁y)◁z = (x◁z)◁(y◁z) fails at {triple:?}")]
    R1Failure { triple: (usize, usize, usize) },
    #[error("translation by {column} is not a permutation")]
    R2Failure { column: usize },
    #[error("ρ_{y} is not the identity")]
    NotDerivedForm { y: usize },
    #[error("rack is not abelian: (a◁b)◁c ≠ (a◁c)◁b at {triple:?}")]
    NotAbelian { triple: (usize, usize, usize) },
    #[error("condition ({condition}) fails: {witness}")]
    ConditionFailure { condition: u8, witness: String },
}

/// Orbit partition with the family `f[i][j] = λ_{x_j}|_{X_i}` in block-local one-line notation.
///
/// Blocks are sorted and ordered by least member; position `k` in block `i` stands for `blocks[i][k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RackData {
    pub blocks: Vec<Vec<usize>>,
    pub f: Vec<Vec<Perm>>,
}

impl Rack {
    pub fn new(op: Vec<Vec<usize>>) -> Result<Self, RackError> {
        let n = op.len();
        if op.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(RackError::Shape { detail: format!("op is not {n}×{n} over 0..{n}") });
        }
        for y in 0..n {
            if Perm::from_images((0..n).map(|x| op[x][y]).collect()).is_none() {
                return Err(RackError::R2Failure { column: y });
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if op[op[x][y]][z] != op[op[x][z]][op[y][z]] {
                        return Err(RackError::R1Failure { triple: (x, y, z) });
                    }
                }
            }
        }
        let quandle = (0..n).all(|x| op[x][x] == x);
        Ok(Rack { op, quandle })
    }

    pub fn n(&self) -> usize {
        self.op.len()
    }

    pub fn op(&self, x: usize, y: usize) -> usize {
        self.op[x][y]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.op
    }

    pub fn is_quandle(&self) -> bool {
        self.quandle
    }

    /// `λ_x(y) = y ◁ x`.
    pub fn lambda(&self, x: usize) -> Perm {
        Perm((0..self.n()).map(|y| self.op[y][x]).collect())
    }

    /// `𝒢(X, ◁) = ⟨λ_x⟩`.
    pub fn group(&self, cap: usize) -> Result<PermGroup, ClosureCapExceeded> {
        PermGroup::generate_named("rack", self.n(), (0..self.n()).map(|x| self.lambda(x)).collect(), cap)
    }

    /// `r(x, y) = (y ◁ x, x)`.
    pub fn to_solution(&self) -> Solution {
        let n = self.n();
        let lam = (0..n).map(|x| (0..n).map(|y| self.op[y][x]).collect()).collect();
        let rho = (0..n).map(|_| (0..n).collect()).collect();
        Solution::new(lam, rho).expect("a rack gives a solution")
    }

    /// `y ◁ x = λ_x(y)` for solutions with every `ρ_y = id`.
    pub fn from_solution(s: &Solution) -> Result<Self, RackError> {
        let n = s.n();
        if let Some(y) = (0..n).find(|&y| (0..n).any(|x| s.rho(y, x) != x)) {
            return Err(RackError::NotDerivedForm { y });
        }
        Rack::new((0..n).map(|y| (0..n).map(|x| s.lam(x, y)).collect()).collect())
    }

    fn abelian_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n();
        let o = &self.op;
        (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .find(|&(a, b, c)| o[o[a][b]][c] != o[o[a][c]][b])
    }

    /// `(a◁b)◁c = (a◁c)◁b` for all triples; cross-checked against commutativity of `𝒢(X, ◁)`.
    pub fn is_abelian(&self) -> bool {
        let by_triples = self.abelian_violation().is_none();
        let gens: Vec<Perm> = (0..self.n()).map(|x| self.lambda(x)).collect();
        let by_group = gens.iter().all(|a| gens.iter().all(|b| a.compose(b) == b.compose(a)));
        assert_eq!(by_triples, by_group, "abelian tests disagree");
        by_triples
    }

    /// Orbits of `⟨λ_x⟩`, ordered by least member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for x in 0..n {
            for y in 0..n {
                let (a, b) = (find(&mut parent, y), find(&mut parent, self.op[y][x]));
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut root_block = vec![usize::MAX; n];
        for x in 0..n {
            let r = find(&mut parent, x);
            if root_block[r] == usize::MAX {
                root_block[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[root_block[r]].push(x);
        }
        blocks
    }

    pub fn classify_abelian(&self) -> Result<RackData, RackError> {
        if let Some(triple) = self.abelian_violation() {
            return Err(RackError::NotAbelian { triple });
        }
        let blocks = self.orbits();
        let local = local_index(self.n(), &blocks);
        let restrict = |i: usize, x: usize| Perm(blocks[i].iter().map(|&a| local[self.op[a][x]]).collect());
        let f: Vec<Vec<Perm>> = (0..blocks.len())
            .map(|i| {
                (0..blocks.len())
                    .map(|j| {
                        let p = restrict(i, blocks[j][0]);
                        assert!(blocks[j].iter().all(|&x| restrict(i, x) == p), "λ depends on the representative");
                        p
                    })
                    .collect()
            })
            .collect();
        let d = RackData { blocks, f };
        check_rack_data(&d)?;
        Ok(d)
    }

    /// Whether every `λ_{x_j}|_{X_i}` has all cycles of one length.
    pub fn cycle_uniformity(&self) -> Result<bool, RackError> {
        let d = self.classify_abelian()?;
        Ok(d.f.iter().flatten().all(|p| {
            let lens: Vec<usize> = p.cycles().iter().map(Vec::len).collect();
            lens.iter().all(|&l| l == lens[0])
        }))
    }
}

fn local_index(n: usize, blocks: &[Vec<usize>]) -> Vec<usize> {
    let mut local = vec![usize::MAX; n];
    for b in blocks {
        for (k, &x) in b.iter().enumerate() {
            local[x] = k;
        }
    }
    local
}

/// Checks the shape and conditions (1)–(3) of rack data.
pub fn check_rack_data(d: &RackData) -> Result<usize, RackError> {
    let n: usize = d.blocks.iter().map(Vec::len).sum();
    let mut seen = vec![false; n];
    for b in &d.blocks {
        if b.is_empty() || b.windows(2).any(|w| w[0] >= w[1]) {
            return Err(RackError::Shape { detail: "blocks must be non-empty and sorted".into() });
        }
        for &x in b {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(RackError::Shape { detail: format!("blocks do not partition 0..{n}") });
            }
        }
    }
    if d.blocks.windows(2).any(|w| w[0][0] >= w[1][0]) {
        return Err(RackError::Shape { detail: "blocks must be ordered by least member".into() });
    }
    let r = d.blocks.len();
    if d.f.len() != r || d.f.iter().any(|row| row.len() != r) {
        return Err(RackError::Shape { detail: format!("f must be {r}×{r}") });
    }
    for (i, row) in d.f.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            if p.degree() != d.blocks[i].len() || Perm::from_images(p.0.clone()).is_none() {
                return Err(RackError::Shape { detail: format!("f[{i}][{j}] is not a permutation of block {i}") });
            }
        }
    }
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                if d.f[i][j].compose(&d.f[i][k]) != d.f[i][k].compose(&d.f[i][j]) {
                    return Err(RackError::ConditionFailure {
                        condition: 1,
                        witness: format!("f[{i}][{j}] and f[{i}][{k}] do not commute"),
                    });
                }
            }
        }
        let g = PermGroup::generate(d.blocks[i].len(), d.f[i].clone(), usize::MAX).expect("uncapped");
        if g.orbits().len() != 1 {
            return Err(RackError::ConditionFailure { condition: 2, witness: format!("block {i} is not one orbit") });
        }
        if let Some(p) = g.elements().iter().find(|p| !p.is_identity() && (0..p.degree()).any(|x| p.apply(x) == x)) {
            return Err(RackError::ConditionFailure {
                condition: 3,
                witness: format!("{p:?} on block {i} has a fixed point"),
            });
        }
    }
    Ok(n)
}

impl RackData {
    pub fn is_quandle(&self) -> bool {
        (0..self.blocks.len()).all(|i| self.f[i][i].is_identity())
    }

    /// `x ◁ y = f_{ij}(x)` for `x ∈ X_i`, `y ∈ X_j`.
    pub fn build(&self) -> Result<Rack, RackError> {
        let n = check_rack_data(self)?;
        let local = local_index(n, &self.blocks);
        let mut block_of = vec![0; n];
        for (i, b) in self.blocks.iter().enumerate() {
            b.iter().for_each(|&x| block_of[x] = i);
        }
        let op = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let i = block_of[x];
                        self.blocks[i][self.f[i][block_of[y]].apply(local[x])]
                    })
                    .collect()
            })
            .collect();
        Rack::new(op)
    }
}

/// The rack ↔ solution correspondence `r(x, y) = (y ◁ x, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bridged {
    Rack(Rack),
    Solution(Solution),
}

pub fn rack_solution_bridge(input: Bridged) -> Result<Bridged, RackError> {
    match input {
        Bridged::Rack(r) => Ok(Bridged::Solution(r.to_solution())),
        Bridged::Solution(s) => Rack::from_solution(&s).map(Bridged::Rack),
    }
}
