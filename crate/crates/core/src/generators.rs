//! Finite members of the standard families: Yablo truncations, the
//! triple-vertex graph YG′ and its collapse YG″, the only-negative example,
//! chains of the four successor forms, trees pointing to the root, and
//! random simply connected systems.
//!
//! Infinite families are cut off at `n`; references past the window are
//! handled by a [`TruncationPolicy`]. Every generator is a deterministic
//! function of its arguments (and seed).

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Formula, VarId};
use crate::graph::VertexMap;
use crate::system::{apply_boundary_policy, DenotationSystem, TruncationPolicy};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("{what} = {value} is outside {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    #[error("a closed chain must end in a constant form")]
    ClosedChainEnd,
    #[error("{vertices} tree vertices exceed the budget of {max}")]
    TreeBudget { vertices: usize, max: usize },
}

fn check(what: &'static str, value: usize, min: usize, max: usize) -> Result<(), GenError> {
    if (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(GenError::OutOfRange { what, value, min, max })
    }
}

fn y(i: usize) -> VarId {
    VarId::new(format!("Y{i}"))
}

fn build(name: String, defs: Vec<(VarId, Formula)>, policy: TruncationPolicy) -> DenotationSystem {
    let inside: BTreeSet<VarId> = defs.iter().map(|(v, _)| v.clone()).collect();
    let in_range = |x: &VarId| inside.contains(x);
    let defs = defs.into_iter().map(|(v, f)| {
        let f = apply_boundary_policy(&f, &in_range, policy);
        (v, f)
    });
    DenotationSystem::new(defs, false)
        .expect("generated names are distinct")
        .with_name(name)
}

/// `d(Y_i) = ⋀{¬Y_j : i < j}` on `Y1..Yn`. The tail past `n` is represented
/// by the single reference `Y_{n+1}`, which the policy removes or grounds.
pub fn gen_yablo(n: usize, policy: TruncationPolicy) -> Result<DenotationSystem, GenError> {
    check("n", n, 1, 16)?;
    let defs = (1..=n)
        .map(|i| {
            (
                y(i),
                Formula::And((i + 1..=n + 1).map(|j| Formula::not(Formula::Var(y(j)))).collect()),
            )
        })
        .collect();
    Ok(build(format!("yablo-{n}"), defs, policy))
}

/// Name of the triple vertex `(Yi,Yj,Yk)`.
pub fn triple(i: usize, j: usize, k: usize) -> VarId {
    VarId::new(format!("(Y{i},Y{j},Y{k})"))
}

/// YG′: vertices `Y1..Yn` followed by the triples `(Yi,Yj,Yk)` with
/// `i < k < j <= n`, sorted by `(i, j, k)`.
///
/// * `d(Y_i) = ¬Y_{i+1} ∧ ⋀{¬(Y_i,Y_j,Y_{i+1}) : i+2 <= j}`
/// * `d(Y_i,Y_j,Y_k) = (Y_i,Y_j,Y_{k+1})` for `k + 1 < j`
/// * `d(Y_i,Y_j,Y_{j-1}) = Y_j`
///
/// The tail of the conjunction is represented by `j = n + 1` (or a single
/// out-of-range triple for `Y_n`).
pub fn gen_ygprime(n: usize, policy: TruncationPolicy) -> Result<DenotationSystem, GenError> {
    check("n", n, 3, 8)?;
    let mut defs: Vec<(VarId, Formula)> = (1..=n)
        .map(|i| {
            let tail = (i + 2..=(n + 1).max(i + 2)).map(|j| Formula::not(Formula::Var(triple(i, j, i + 1))));
            let mut items = alloc::vec![Formula::not(Formula::Var(y(i + 1)))];
            items.extend(tail);
            (y(i), Formula::And(items))
        })
        .collect();
    for (i, j, k) in ygprime_triples(n) {
        let next = if k + 1 < j { triple(i, j, k + 1) } else { y(j) };
        defs.push((triple(i, j, k), Formula::Var(next)));
    }
    Ok(build(format!("ygprime-{n}"), defs, policy))
}

fn ygprime_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..=n).flat_map(move |i| (i + 2..=n).flat_map(move |j| (i + 1..j).map(move |k| (i, j, k))))
}

/// Name of the collapsed vertex `<Yk>`.
pub fn collapsed(k: usize) -> VarId {
    VarId::new(format!("<Y{k}>"))
}

/// YG″: the successor chain `<Y1> -> ... -> <Yn>` with `d(<Yi>) = <Y_{i+1}>`
/// and `d(<Yn>) = TRUE`.
pub fn gen_ygpp(n: usize) -> Result<DenotationSystem, GenError> {
    check("n", n, 1, 24)?;
    let defs = (1..=n).map(|i| {
        let f = if i < n {
            Formula::Var(collapsed(i + 1))
        } else {
            Formula::True
        };
        (collapsed(i), f)
    });
    Ok(DenotationSystem::new(defs, false)
        .expect("generated names are distinct")
        .with_name(format!("ygpp-{n}")))
}

/// The collapse of YG′ onto YG″: `Y_k` and every `(Y_i,Y_j,Y_k)` go to
/// `<Yk>`.
pub fn yg_collapse_map(n: usize) -> Result<VertexMap, GenError> {
    check("n", n, 3, 8)?;
    let mut map: VertexMap = (1..=n).map(|k| (y(k), collapsed(k))).collect();
    map.extend(ygprime_triples(n).map(|(i, j, k)| (triple(i, j, k), collapsed(k))));
    Ok(map)
}

/// `d(Y_i) = ¬Y_{i+1} ∧ X_{i+2}` and `d(X_i) = ¬Y_i ∧ X_{i+1}` on
/// `Y1..Yn` followed by `X3..Xn`.
pub fn gen_only_negative(n: usize, policy: TruncationPolicy) -> Result<DenotationSystem, GenError> {
    check("n", n, 4, 16)?;
    let x = |i: usize| VarId::new(format!("X{i}"));
    let mut defs: Vec<(VarId, Formula)> = (1..=n)
        .map(|i| {
            (
                y(i),
                Formula::And(alloc::vec![
                    Formula::not(Formula::Var(y(i + 1))),
                    Formula::Var(x(i + 2))
                ]),
            )
        })
        .collect();
    defs.extend((3..=n).map(|i| {
        (
            x(i),
            Formula::And(alloc::vec![Formula::not(Formula::Var(y(i))), Formula::Var(x(i + 1))]),
        )
    }));
    Ok(build(format!("only-negative-{n}"), defs, policy))
}

/// Form of a chain vertex relative to its successor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainForm {
    Next,
    NotNext,
    ConstTrue,
    ConstFalse,
}

impl ChainForm {
    pub const ALL: [ChainForm; 4] = [
        ChainForm::Next,
        ChainForm::NotNext,
        ChainForm::ConstTrue,
        ChainForm::ConstFalse,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ChainForm::Next => "next",
            ChainForm::NotNext => "not_next",
            ChainForm::ConstTrue => "const_true",
            ChainForm::ConstFalse => "const_false",
        }
    }
}

impl FromStr for ChainForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "next" => Ok(ChainForm::Next),
            "not_next" | "not" => Ok(ChainForm::NotNext),
            "const_true" | "true" => Ok(ChainForm::ConstTrue),
            "const_false" | "false" => Ok(ChainForm::ConstFalse),
            other => Err(format!("unknown chain form `{other}`")),
        }
    }
}

/// The chain `x1 -> x2 -> ...` with one form per vertex. With `open_end`
/// the last vertex refers to the free variable `x{n+1}`; otherwise its
/// form must be a constant and it is denoted by the bare constant. Inner
/// constants are the tautology / contradiction on the successor, so every
/// vertex keeps its edge.
pub fn gen_chain(forms: &[ChainForm], open_end: bool) -> Result<DenotationSystem, GenError> {
    check("length", forms.len(), 1, 20)?;
    let x = |i: usize| VarId::new(format!("x{i}"));
    let n = forms.len();
    let mut defs = Vec::with_capacity(n);
    for (k, &form) in forms.iter().enumerate() {
        let i = k + 1;
        let f = if i < n || open_end {
            let s = Formula::Var(x(i + 1));
            match form {
                ChainForm::Next => s,
                ChainForm::NotNext => Formula::not(s),
                ChainForm::ConstTrue => Formula::Or(alloc::vec![s.clone(), Formula::not(s)]),
                ChainForm::ConstFalse => Formula::And(alloc::vec![s.clone(), Formula::not(s)]),
            }
        } else {
            match form {
                ChainForm::ConstTrue => Formula::True,
                ChainForm::ConstFalse => Formula::False,
                _ => return Err(GenError::ClosedChainEnd),
            }
        };
        defs.push((x(i), f));
    }
    let tags: Vec<&str> = forms.iter().map(|f| f.tag()).collect();
    let name = format!("chain-{}{}", tags.join("-"), if open_end { "-open" } else { "" });
    Ok(DenotationSystem::new(defs, false)
        .expect("generated names are distinct")
        .with_name(name))
}

/// Largest tree [`gen_tree_to_root`] builds.
pub const MAX_TREE_VERTICES: usize = 200;

/// Complete tree pointing to the root `R`, read the Yablo way: every
/// vertex has an edge to each of its ancestors and denotes the conjunction
/// of their negations (`d(R)` is the empty conjunction). The children of
/// `v` are `v_1 .. v_b`, listed breadth first. "Root true, everything else
/// false" is then acceptable at every depth; with depth 1 each child
/// denotes just the negated root.
pub fn gen_tree_to_root(branching: usize, depth: usize) -> Result<DenotationSystem, GenError> {
    let mut count = 1usize;
    let mut level = 1usize;
    for _ in 0..depth {
        level = level.saturating_mul(branching);
        count = count.saturating_add(level);
        if count > MAX_TREE_VERTICES {
            return Err(GenError::TreeBudget {
                vertices: count,
                max: MAX_TREE_VERTICES,
            });
        }
    }
    let root = VarId::new("R");
    let mut defs = alloc::vec![(root.clone(), Formula::And(Vec::new()))];
    // (vertex, its ancestors root first)
    let mut frontier = alloc::vec![(root, Vec::<VarId>::new())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (parent, above) in &frontier {
            let mut ancestors = above.clone();
            ancestors.push(parent.clone());
            for c in 1..=branching {
                let child = VarId::new(format!("{parent}_{c}"));
                let f = Formula::conjoin(ancestors.iter().map(|a| Formula::not(Formula::Var(a.clone()))));
                defs.push((child.clone(), f));
                next.push((child, ancestors.clone()));
            }
        }
        frontier = next;
    }
    Ok(DenotationSystem::new(defs, false)
        .expect("generated names are distinct")
        .with_name(format!("tree-{branching}-{depth}")))
}

/// Random closed system on `v1..vn` whose dependency graph is simply
/// connected: each vertex after the first joins an earlier one with
/// probability 4/5, the edge pointing either way. Every formula mentions
/// all successors of its vertex, sometimes through an irrelevant
/// tautology or contradiction.
pub fn gen_random_simply_connected(
    n: usize,
    seed: u64,
    max_formula_depth: usize,
) -> Result<DenotationSystem, GenError> {
    check("n", n, 1, 12)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<VarId> = (1..=n).map(|i| VarId::new(format!("v{i}"))).collect();
    let mut succ: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for i in 1..n {
        if rng.random_bool(0.8) {
            let p = rng.random_range(0..i);
            if rng.random_bool(0.5) {
                succ[i].push(p);
            } else {
                succ[p].push(i);
            }
        }
    }
    let depth = max_formula_depth.max(1);
    let defs = (0..n)
        .map(|i| {
            let mut s = succ[i].clone();
            s.sort_unstable();
            let f = if s.is_empty() {
                Formula::constant(rng.random_bool(0.5))
            } else {
                random_formula(
                    &mut rng,
                    &s.iter().map(|&j| names[j].clone()).collect::<Vec<_>>(),
                    depth,
                )
            };
            (names[i].clone(), f)
        })
        .collect::<Vec<_>>();
    Ok(DenotationSystem::new(defs, false)
        .expect("generated names are distinct")
        .with_name(format!("random-sc-{n}-{seed}")))
}

fn random_formula(rng: &mut ChaCha8Rng, vars: &[VarId], depth: usize) -> Formula {
    let mut leaves: Vec<Formula> = vars
        .iter()
        .map(|v| {
            let lit = Formula::Var(v.clone());
            if rng.random_bool(0.5) {
                lit
            } else {
                Formula::not(lit)
            }
        })
        .collect();
    if rng.random_bool(0.2) {
        let v = Formula::Var(vars[rng.random_range(0..vars.len())].clone());
        let gadget = if rng.random_bool(0.5) {
            Formula::Or(alloc::vec![v.clone(), Formula::not(v)])
        } else {
            Formula::And(alloc::vec![v.clone(), Formula::not(v)])
        };
        let at = rng.random_range(0..=leaves.len());
        leaves.insert(at, gadget);
    }
    combine(rng, leaves, depth)
}

fn combine(rng: &mut ChaCha8Rng, mut leaves: Vec<Formula>, depth: usize) -> Formula {
    let f = if leaves.len() == 1 {
        leaves.pop().unwrap()
    } else if depth <= 1 || leaves.len() == 2 {
        junction(rng, leaves)
    } else {
        let parts = rng.random_range(2..=leaves.len().min(3));
        let mut groups = Vec::with_capacity(parts);
        for p in (1..=parts).rev() {
            // leave at least one leaf for each remaining group
            let take = if p == 1 {
                leaves.len()
            } else {
                rng.random_range(1..=leaves.len() - (p - 1))
            };
            let rest = leaves.split_off(take);
            groups.push(combine(rng, leaves, depth - 1));
            leaves = rest;
        }
        junction(rng, groups)
    };
    if rng.random_bool(0.2) {
        Formula::not(f)
    } else {
        f
    }
}

fn junction(rng: &mut ChaCha8Rng, items: Vec<Formula>) -> Formula {
    if rng.random_bool(0.5) {
        Formula::And(items)
    } else {
        Formula::Or(items)
    }
}
