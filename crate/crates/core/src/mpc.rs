//! Maximum Price Coverage.
//!
//! Given a universe of priced elements, a family of subsets partitioned into
//! priced classes, and a cardinality bound `K`, pick at most `K` sets
//! maximizing the price of the covered elements plus the price of every class
//! from which at least one set was picked.
//!
//! [`solve_mpc`] runs a dynamic program over `(covered ⊇ U, |C| = q, prefix of
//! sets, whether the current class is used)` in `2^ν · poly` time, where `ν` is
//! the universe size.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

/// Default cap on the universe size accepted by [`solve_mpc`].
pub const DEFAULT_MAX_UNIVERSE: usize = 24;
/// Hard limit imposed by the 64-bit element masks.
const MASK_BITS: usize = 63;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MpcError {
    #[error("universe of {size} elements exceeds the cap of {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
    #[error("set {set} contains element {element} outside the universe")]
    ElementOutOfRange { set: usize, element: usize },
    #[error("partition class {0} is empty")]
    EmptyClass(usize),
    #[error("set {0} appears in more than one partition class")]
    OverlappingClasses(usize),
    #[error("set {0} is not covered by the partition")]
    Uncovered(usize),
    #[error("price table has {found} entries, expected {expected}")]
    PriceArity { found: usize, expected: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A Maximum Price Coverage instance. Elements and sets are 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpcInstance {
    pub universe_size: usize,
    pub sets: Vec<Vec<usize>>,
    /// Partition of set indices into classes.
    pub classes: Vec<Vec<usize>>,
    pub element_price: Vec<u64>,
    pub class_price: Vec<u64>,
    /// Maximum number of sets that may be picked.
    pub max_sets: usize,
}

impl MpcInstance {
    pub fn validate(&self) -> Result<(), MpcError> {
        if self.element_price.len() != self.universe_size {
            return Err(MpcError::PriceArity {
                found: self.element_price.len(),
                expected: self.universe_size,
            });
        }
        if self.class_price.len() != self.classes.len() {
            return Err(MpcError::PriceArity {
                found: self.class_price.len(),
                expected: self.classes.len(),
            });
        }
        for (i, set) in self.sets.iter().enumerate() {
            if let Some(&e) = set.iter().find(|&&e| e >= self.universe_size) {
                return Err(MpcError::ElementOutOfRange { set: i, element: e });
            }
        }
        let mut owner = vec![None; self.sets.len()];
        for (c, class) in self.classes.iter().enumerate() {
            if class.is_empty() {
                return Err(MpcError::EmptyClass(c));
            }
            for &s in class {
                match owner.get_mut(s) {
                    None => return Err(MpcError::Uncovered(s)),
                    Some(Some(_)) => return Err(MpcError::OverlappingClasses(s)),
                    Some(slot) => *slot = Some(c),
                }
            }
        }
        if let Some(s) = owner.iter().position(Option::is_none) {
            return Err(MpcError::Uncovered(s));
        }
        Ok(())
    }

    /// Class index of every set. Assumes a validated instance.
    pub fn class_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.sets.len()];
        for (c, class) in self.classes.iter().enumerate() {
            for &s in class {
                out[s] = c;
            }
        }
        out
    }

    /// `pr(C)` evaluated directly from the definition.
    pub fn price_of(&self, chosen: &[usize]) -> u64 {
        let class_of = self.class_of();
        let mut covered = vec![false; self.universe_size];
        let mut touched = vec![false; self.classes.len()];
        for &s in chosen {
            touched[class_of[s]] = true;
            for &e in &self.sets[s] {
                covered[e] = true;
            }
        }
        let elements: u64 = covered
            .iter()
            .zip(&self.element_price)
            .filter(|(c, _)| **c)
            .map(|(_, p)| p)
            .sum();
        let classes: u64 = touched
            .iter()
            .zip(&self.class_price)
            .filter(|(t, _)| **t)
            .map(|(_, p)| p)
            .sum();
        elements + classes
    }

    fn set_mask(&self, s: usize) -> u64 {
        self.sets[s].iter().fold(0u64, |m, &e| m | 1 << e)
    }

    /// Serializes to the line format read by [`MpcInstance::parse`]; class ids and
    /// elements are written 1-based.
    pub fn to_text(&self) -> String {
        let class_of = self.class_of();
        let mut out = String::new();
        writeln!(out, "u {}", self.universe_size).unwrap();
        for (s, set) in self.sets.iter().enumerate() {
            write!(out, "s {}", class_of[s] + 1).unwrap();
            for e in set {
                write!(out, " {}", e + 1).unwrap();
            }
            out.push('\n');
        }
        for (e, p) in self.element_price.iter().enumerate() {
            writeln!(out, "pe {} {}", e + 1, p).unwrap();
        }
        for (c, p) in self.class_price.iter().enumerate() {
            writeln!(out, "px {} {}", c + 1, p).unwrap();
        }
        writeln!(out, "k {}", self.max_sets).unwrap();
        out
    }

    /// Parses the `u`/`s`/`pe`/`px`/`k` line format. Class ids may be any
    /// non-negative integers; classes are ordered by ascending id. Unlisted
    /// prices default to zero.
    pub fn parse(text: &str) -> Result<MpcInstance, MpcError> {
        let err = |line: usize, message: String| MpcError::Parse { line, message };
        let mut universe: Option<usize> = None;
        let mut sets: Vec<(u64, Vec<usize>)> = Vec::new();
        let mut element_prices: Vec<(usize, usize, u64)> = Vec::new();
        let mut class_prices: Vec<(usize, u64, u64)> = Vec::new();
        let mut k: Option<usize> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let kind = tokens.next().unwrap();
            let nums = tokens
                .map(|t| t.parse::<u64>().map_err(|_| err(line_no, format!("expected an integer, found `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let arity = |n: usize| {
                if nums.len() == n {
                    Ok(())
                } else {
                    Err(err(line_no, format!("`{kind}` takes {n} argument(s)")))
                }
            };
            match kind {
                "u" => {
                    arity(1)?;
                    universe = Some(nums[0] as usize);
                }
                "s" => {
                    if nums.is_empty() {
                        return Err(err(line_no, "`s` needs a class id".into()));
                    }
                    let elems = nums[1..]
                        .iter()
                        .map(|&e| {
                            if e == 0 {
                                Err(err(line_no, "elements are 1-based".into()))
                            } else {
                                Ok(e as usize - 1)
                            }
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    sets.push((nums[0], elems));
                }
                "pe" => {
                    arity(2)?;
                    if nums[0] == 0 {
                        return Err(err(line_no, "elements are 1-based".into()));
                    }
                    element_prices.push((line_no, nums[0] as usize - 1, nums[1]));
                }
                "px" => {
                    arity(2)?;
                    class_prices.push((line_no, nums[0], nums[1]));
                }
                "k" => {
                    arity(1)?;
                    k = Some(nums[0] as usize);
                }
                other => return Err(err(line_no, format!("unknown line type `{other}`"))),
            }
        }

        let universe_size = universe.ok_or_else(|| err(0, "missing `u` line".into()))?;
        let max_sets = k.ok_or_else(|| err(0, "missing `k` line".into()))?;
        let mut class_index: BTreeMap<u64, usize> = sets.iter().map(|(c, _)| (*c, 0)).collect();
        for (i, v) in class_index.values_mut().enumerate() {
            *v = i;
        }
        let mut classes = vec![Vec::new(); class_index.len()];
        for (s, (c, _)) in sets.iter().enumerate() {
            classes[class_index[c]].push(s);
        }
        let mut element_price = vec![0; universe_size];
        for (line, e, p) in element_prices {
            *element_price
                .get_mut(e)
                .ok_or_else(|| err(line, format!("element {} outside the universe", e + 1)))? = p;
        }
        let mut class_price = vec![0; classes.len()];
        for (line, c, p) in class_prices {
            let idx = class_index
                .get(&c)
                .ok_or_else(|| err(line, format!("class {c} has no sets")))?;
            class_price[*idx] = p;
        }
        let inst = MpcInstance {
            universe_size,
            sets: sets.into_iter().map(|(_, e)| e).collect(),
            classes,
            element_price,
            class_price,
            max_sets,
        };
        inst.validate()?;
        Ok(inst)
    }
}

/// An instance whose sets are grouped contiguously by class.
#[derive(Clone, Debug)]
pub struct OrderedInstance {
    pub instance: MpcInstance,
    /// `order[new] = old` set index.
    pub order: Vec<usize>,
}

/// Stable-sorts the sets by class index so each class occupies a contiguous range.
pub fn order_sets(inst: &MpcInstance) -> OrderedInstance {
    let class_of = inst.class_of();
    let mut order: Vec<usize> = (0..inst.sets.len()).collect();
    order.sort_by_key(|&s| class_of[s]);
    let mut new_index = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }
    let instance = MpcInstance {
        sets: order.iter().map(|&old| inst.sets[old].clone()).collect(),
        classes: inst
            .classes
            .iter()
            .map(|class| {
                let mut c: Vec<usize> = class.iter().map(|&s| new_index[s]).collect();
                c.sort_unstable();
                c
            })
            .collect(),
        ..inst.clone()
    };
    OrderedInstance { instance, order }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpcSolution {
    /// Chosen set indices, ascending.
    pub chosen: Vec<usize>,
    pub price: u64,
}

const NEG: i64 = i64::MIN / 4;

#[inline]
fn plus(v: i64, p: i64) -> i64 {
    if v <= NEG {
        NEG
    } else {
        v + p
    }
}

/// The table `F[U, q, i, x]`: the best class profit of a selection `C` drawn
/// from the first `i + 1` sets with `|C| = q`, covering at least `U`, and
/// using the class of set `i` exactly when `x` holds.
pub struct MpcTable {
    universe: usize,
    sets: usize,
    max_q: usize,
    values: Vec<i64>,
}

impl MpcTable {
    #[inline]
    fn idx(&self, u: u64, q: usize, i: usize, x: bool) -> usize {
        (((i * (self.max_q + 1) + q) * 2 + x as usize) << self.universe) + u as usize
    }

    /// `None` stands for `−∞`.
    pub fn get(&self, u: u64, q: usize, i: usize, x: bool) -> Option<i64> {
        let v = self.values[self.idx(u, q, i, x)];
        (v > NEG).then_some(v)
    }

    #[inline]
    fn raw(&self, u: u64, q: usize, i: usize, x: bool) -> i64 {
        self.values[self.idx(u, q, i, x)]
    }

    pub fn max_q(&self) -> usize {
        self.max_q
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }
}

/// Fills the table for an instance whose sets are already class-contiguous.
pub fn fill_table(inst: &MpcInstance) -> MpcTable {
    let nu = inst.universe_size;
    let mu = inst.sets.len();
    // an optimum never needs more than one set per class plus one per element
    let max_q = inst.max_sets.min(mu).min(inst.classes.len() + nu);
    let full = 1u64 << nu;
    let mut table = MpcTable {
        universe: nu,
        sets: mu,
        max_q,
        values: vec![NEG; (mu * (max_q + 1) * 2) << nu],
    };
    if mu == 0 {
        return table;
    }
    let class_of = inst.class_of();
    let masks: Vec<u64> = (0..mu).map(|s| inst.set_mask(s)).collect();

    let base = table.idx(0, 0, 0, false);
    table.values[base] = 0;
    if max_q >= 1 {
        let p = inst.class_price[class_of[0]] as i64;
        let s0 = masks[0];
        // every U ⊆ S_0
        let mut u = s0;
        loop {
            let at = table.idx(u, 1, 0, true);
            table.values[at] = p;
            if u == 0 {
                break;
            }
            u = (u - 1) & s0;
        }
    }

    for j in 1..mu {
        let same = class_of[j - 1] == class_of[j];
        let p = inst.class_price[class_of[j]] as i64;
        let sj = masks[j];
        let at = table.idx(0, 0, j, false);
        table.values[at] = 0;
        for q in 1..=max_q {
            for u in 0..full {
                let rest = u & !sj;
                let off = if same {
                    table.raw(u, q, j - 1, false)
                } else {
                    table.raw(u, q, j - 1, true).max(table.raw(u, q, j - 1, false))
                };
                let on = if same {
                    table
                        .raw(u, q, j - 1, true)
                        .max(table.raw(rest, q - 1, j - 1, true))
                        .max(plus(table.raw(rest, q - 1, j - 1, false), p))
                } else {
                    plus(table.raw(rest, q - 1, j - 1, true), p).max(plus(table.raw(rest, q - 1, j - 1, false), p))
                };
                let a = table.idx(u, q, j, false);
                table.values[a] = off;
                let b = table.idx(u, q, j, true);
                table.values[b] = on;
            }
        }
    }
    table
}

pub fn solve_mpc(inst: &MpcInstance) -> Result<MpcSolution, MpcError> {
    solve_mpc_with_cap(inst, DEFAULT_MAX_UNIVERSE)
}

pub fn solve_mpc_with_cap(inst: &MpcInstance, max_universe: usize) -> Result<MpcSolution, MpcError> {
    inst.validate()?;
    let cap = max_universe.min(MASK_BITS);
    if inst.universe_size > cap {
        return Err(MpcError::UniverseTooLarge {
            size: inst.universe_size,
            cap,
        });
    }
    if inst.sets.is_empty() {
        return Ok(MpcSolution { chosen: Vec::new(), price: 0 });
    }
    let ordered = order_sets(inst);
    let oi = &ordered.instance;
    let table = fill_table(oi);
    let nu = oi.universe_size;
    let last = oi.sets.len() - 1;

    let mut element_sum = vec![0i64; 1 << nu];
    for u in 1..(1u64 << nu) {
        let low = u.trailing_zeros() as usize;
        element_sum[u as usize] = element_sum[(u & (u - 1)) as usize] + oi.element_price[low] as i64;
    }

    // (value, u, q, x); ties keep the first found
    let mut best = (0i64, 0u64, 0usize, false);
    for q in 0..=table.max_q() {
        for u in 0..(1u64 << nu) {
            for x in [false, true] {
                let f = table.raw(u, q, last, x);
                if f > NEG && element_sum[u as usize] + f > best.0 {
                    best = (element_sum[u as usize] + f, u, q, x);
                }
            }
        }
    }

    let chosen_new = reconstruct(oi, &table, best.1, best.2, best.3);
    let mut chosen: Vec<usize> = chosen_new.into_iter().map(|s| ordered.order[s]).collect();
    chosen.sort_unstable();
    let price = best.0 as u64;
    debug_assert_eq!(inst.price_of(&chosen), price);
    Ok(MpcSolution { chosen, price })
}

fn reconstruct(inst: &MpcInstance, table: &MpcTable, mut u: u64, mut q: usize, mut x: bool) -> Vec<usize> {
    let class_of = inst.class_of();
    let mut chosen = Vec::new();
    let mut value = table.raw(u, q, inst.sets.len() - 1, x);
    for j in (0..inst.sets.len()).rev() {
        if q == 0 {
            break;
        }
        if j == 0 {
            debug_assert!(x && q == 1);
            chosen.push(0);
            break;
        }
        let same = class_of[j - 1] == class_of[j];
        if !x {
            // S_j unused; only the class flag of the predecessor may change
            x = !same && table.raw(u, q, j - 1, true) == value;
            continue;
        }
        if same && table.raw(u, q, j - 1, true) == value {
            continue;
        }
        let p = inst.class_price[class_of[j]] as i64;
        let rest = u & !inst.set_mask(j);
        chosen.push(j);
        if same {
            if table.raw(rest, q - 1, j - 1, true) == value {
                x = true;
            } else {
                x = false;
                value -= p;
            }
        } else {
            x = plus(table.raw(rest, q - 1, j - 1, true), p) == value;
            value -= p;
        }
        u = rest;
        q -= 1;
    }
    chosen
}
