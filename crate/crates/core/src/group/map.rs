//! L-valued maps on groups: explicit tables, first-match linear region
//! rules over `ℤⁿ`, and closures.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::ZVec;
use crate::frame::FrameElt;

/// A map `G → L`; `None` means "not known at this point" (outside the
/// computed region), never bottom.
pub trait ValueMap<E>: Send + Sync {
    fn value(&self, x: &E) -> Option<FrameElt>;
}

impl<E, M: ValueMap<E> + ?Sized> ValueMap<E> for &M {
    fn value(&self, x: &E) -> Option<FrameElt> {
        (**self).value(x)
    }
}

impl<E, M: ValueMap<E> + ?Sized> ValueMap<E> for Arc<M> {
    fn value(&self, x: &E) -> Option<FrameElt> {
        (**self).value(x)
    }
}

impl<E, M: ValueMap<E> + ?Sized> ValueMap<E> for Box<M> {
    fn value(&self, x: &E) -> Option<FrameElt> {
        (**self).value(x)
    }
}

/// Values at finitely many points, with an optional fallback elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointMap<E: Ord> {
    values: BTreeMap<E, FrameElt>,
    default: Option<FrameElt>,
}

impl<E: Ord + Copy> PointMap<E> {
    pub fn new(values: BTreeMap<E, FrameElt>, default: Option<FrameElt>) -> Self {
        PointMap { values, default }
    }

    pub fn from_fn(points: &[E], f: impl Fn(&E) -> FrameElt) -> Self {
        PointMap { values: points.iter().map(|p| (*p, f(p))).collect(), default: None }
    }

    /// Tabulates another map over `points`; points where it is unknown stay
    /// unknown.
    pub fn tabulate<M: ValueMap<E> + ?Sized>(points: &[E], m: &M) -> Self {
        PointMap {
            values: points.iter().filter_map(|p| m.value(p).map(|v| (*p, v))).collect(),
            default: None,
        }
    }

    pub fn with_default(mut self, d: FrameElt) -> Self {
        self.default = Some(d);
        self
    }

    pub fn set(&mut self, p: E, v: FrameElt) {
        self.values.insert(p, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, FrameElt)> {
        self.values.iter().map(|(p, v)| (p, *v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn default_value(&self) -> Option<FrameElt> {
        self.default
    }
}

impl PointMap<usize> {
    /// Total map on `0..vals.len()`.
    pub fn table(vals: Vec<FrameElt>) -> Self {
        PointMap { values: vals.into_iter().enumerate().collect(), default: None }
    }

    /// Values at `0..n`, for maps on finite groups.
    pub fn to_vec(&self, n: usize) -> Option<Vec<FrameElt>> {
        (0..n).map(|i| self.value(&i)).collect()
    }
}

impl<E: Ord + Send + Sync> ValueMap<E> for PointMap<E> {
    fn value(&self, x: &E) -> Option<FrameElt> {
        self.values.get(x).copied().or(self.default)
    }
}

/// Comparison in a linear constraint `coeffs·x + constant OP 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
    Ne,
    /// `k` divides the left-hand side.
    Mod(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<i64>,
    pub constant: i64,
    pub op: CmpOp,
}

impl Constraint {
    pub fn new(coeffs: Vec<i64>, constant: i64, op: CmpOp) -> Self {
        Constraint { coeffs, constant, op }
    }

    pub fn holds(&self, x: &ZVec) -> bool {
        let lhs: i64 = self.coeffs.iter().zip(x.coords()).map(|(a, b)| a * b).sum::<i64>() + self.constant;
        match self.op {
            CmpOp::Ge => lhs >= 0,
            CmpOp::Gt => lhs > 0,
            CmpOp::Le => lhs <= 0,
            CmpOp::Lt => lhs < 0,
            CmpOp::Eq => lhs == 0,
            CmpOp::Ne => lhs != 0,
            CmpOp::Mod(k) => k != 0 && lhs.rem_euclid(k) == 0,
        }
    }
}

/// A conjunction of constraints and the value it assigns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub constraints: Vec<Constraint>,
    pub value: FrameElt,
}

/// First matching rule wins; the default covers everything else. Total on
/// `ℤⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegionMap {
    rank: usize,
    rules: Vec<Rule>,
    default: FrameElt,
}

impl RegionMap {
    pub fn new(rank: usize, rules: Vec<Rule>, default: FrameElt) -> Self {
        RegionMap { rank, rules, default }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn default_value(&self) -> FrameElt {
        self.default
    }

    /// The sign cone on `ℤ`: `zero` at 0, `pos` on positives, `neg` on
    /// negatives.
    pub fn signs(zero: FrameElt, pos: FrameElt, neg: FrameElt) -> Self {
        RegionMap::new(
            1,
            alloc::vec![
                Rule { constraints: alloc::vec![Constraint::new(alloc::vec![1], 0, CmpOp::Eq)], value: zero },
                Rule { constraints: alloc::vec![Constraint::new(alloc::vec![1], 0, CmpOp::Gt)], value: pos },
            ],
            neg,
        )
    }

    pub fn eval(&self, x: &ZVec) -> FrameElt {
        self.rules
            .iter()
            .find(|r| r.constraints.iter().all(|c| c.holds(x)))
            .map_or(self.default, |r| r.value)
    }
}

impl ValueMap<ZVec> for RegionMap {
    fn value(&self, x: &ZVec) -> Option<FrameElt> {
        (x.rank() == self.rank).then(|| self.eval(x))
    }
}

/// A map given by a closure.
#[derive(Clone)]
pub struct FnMap<E>(pub Arc<dyn Fn(&E) -> Option<FrameElt> + Send + Sync>);

impl<E> FnMap<E> {
    pub fn new(f: impl Fn(&E) -> Option<FrameElt> + Send + Sync + 'static) -> Self {
        FnMap(Arc::new(f))
    }
}

impl<E> ValueMap<E> for FnMap<E> {
    fn value(&self, x: &E) -> Option<FrameElt> {
        (self.0)(x)
    }
}
