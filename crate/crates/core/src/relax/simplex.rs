//! Dense two-phase primal simplex, exact and fraction-free: the tableau holds
//! integers over one shared denominator, updated by exact division. Arithmetic
//! runs in `i128` and is replayed in `BigInt` if it ever overflows.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { point: Vec<Q>, value: Q },
    /// `point + t·ray` is feasible for all `t ≥ 0` and the objective grows along `ray`.
    Unbounded { point: Vec<Q>, ray: Vec<Q> },
}

#[derive(Debug)]
struct Overflow;

type Step<T> = std::result::Result<T, Overflow>;

trait Scalar: Clone + Debug + Ord {
    fn lift(v: &BigInt) -> Step<Self>;
    fn big(&self) -> BigInt;
    fn zero() -> Self;
    fn sign(&self) -> std::cmp::Ordering;
    fn neg(&self) -> Step<Self>;
    fn mul(&self, o: &Self) -> Step<Self>;
    /// `(x·p − y·z) / d`, exact by the pivoting invariant.
    fn update(x: &Self, p: &Self, y: &Self, z: &Self, d: &Self) -> Step<Self>;
    /// `x − y·z`.
    fn sub_mul(x: &Self, y: &Self, z: &Self) -> Step<Self>;

    fn is_zero(&self) -> bool {
        self.sign().is_eq()
    }
    fn is_positive(&self) -> bool {
        self.sign().is_gt()
    }
}

impl Scalar for i128 {
    fn lift(v: &BigInt) -> Step<Self> {
        v.to_i128().ok_or(Overflow)
    }
    fn big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn zero() -> Self {
        0
    }
    fn sign(&self) -> std::cmp::Ordering {
        self.cmp(&0)
    }
    fn neg(&self) -> Step<Self> {
        self.checked_neg().ok_or(Overflow)
    }
    fn mul(&self, o: &Self) -> Step<Self> {
        self.checked_mul(*o).ok_or(Overflow)
    }
    fn update(x: &Self, p: &Self, y: &Self, z: &Self, d: &Self) -> Step<Self> {
        let num = x.checked_mul(*p).zip(y.checked_mul(*z)).and_then(|(a, b)| a.checked_sub(b)).ok_or(Overflow)?;
        debug_assert!(num % d == 0, "inexact tableau division");
        Ok(num / d)
    }
    fn sub_mul(x: &Self, y: &Self, z: &Self) -> Step<Self> {
        y.checked_mul(*z).and_then(|m| x.checked_sub(m)).ok_or(Overflow)
    }
}

impl Scalar for BigInt {
    fn lift(v: &BigInt) -> Step<Self> {
        Ok(v.clone())
    }
    fn big(&self) -> BigInt {
        self.clone()
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn sign(&self) -> std::cmp::Ordering {
        Signed::signum(self).cmp(&<BigInt as Zero>::zero())
    }
    fn neg(&self) -> Step<Self> {
        Ok(-self)
    }
    fn mul(&self, o: &Self) -> Step<Self> {
        Ok(self * o)
    }
    fn update(x: &Self, p: &Self, y: &Self, z: &Self, d: &Self) -> Step<Self> {
        let num = x * p - y * z;
        if d.is_one() {
            return Ok(num);
        }
        let (q, r) = num.div_rem(d);
        debug_assert!(Zero::is_zero(&r), "inexact tableau division");
        Ok(q)
    }
    fn sub_mul(x: &Self, y: &Self, z: &Self) -> Step<Self> {
        Ok(x - y * z)
    }
}

/// Tableau of a feasible basis of `{x ≥ 0 : A x = b}`; `rows[i][j]` stands for
/// `rows[i][j] / den`, and likewise `rhs`.
#[derive(Clone, Debug)]
struct Tableau<T> {
    n: usize,
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    den: T,
    basis: Vec<usize>,
}

impl<T: Scalar> Tableau<T> {
    /// Pivots on `(r, c)`, updating the reduced-cost row `obj` alongside the tableau.
    fn pivot(&mut self, r: usize, c: usize, mut obj: Option<&mut Vec<T>>) -> Step<()> {
        let p = self.rows[r][c].clone();
        let d = std::mem::replace(&mut self.den, p.clone());
        let nz: Vec<(usize, T)> =
            self.rows[r].iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect();
        let prhs = self.rhs[r].clone();
        let zero = T::zero();
        let eliminate = |row: &mut Vec<T>, f: &T| -> Step<()> {
            let mut k = 0;
            for (j, v) in row.iter_mut().enumerate() {
                let z = if k < nz.len() && nz[k].0 == j {
                    k += 1;
                    &nz[k - 1].1
                } else {
                    &zero
                };
                *v = T::update(v, &p, f, z, &d)?;
            }
            Ok(())
        };
        for i in (0..self.rows.len()).filter(|&i| i != r) {
            let f = self.rows[i][c].clone();
            eliminate(&mut self.rows[i], &f)?;
            self.rhs[i] = T::update(&self.rhs[i], &p, &f, &prhs, &d)?;
        }
        if let Some(obj) = obj.as_deref_mut() {
            let f = obj[c].clone();
            eliminate(obj, &f)?;
        }
        // keep the shared denominator positive
        if p.sign().is_lt() {
            for v in self.rows.iter_mut().flatten().chain(self.rhs.iter_mut()) {
                *v = v.neg()?;
            }
            if let Some(obj) = obj {
                for v in obj.iter_mut() {
                    *v = v.neg()?;
                }
            }
            self.den = self.den.neg()?;
        }
        self.basis[r] = c;
        Ok(())
    }

    /// Maximizes the integer objective `c` over the first `limit` columns. Dantzig
    /// pricing, falling back to Bland's rule while pivots are degenerate so that
    /// cycling cannot occur. Returns an entering column with no leaving row when unbounded.
    fn optimize(&mut self, c: &[T], limit: usize) -> Step<Option<usize>> {
        let width = self.rows.first().map_or(limit, Vec::len);
        // reduced costs scaled by den: c_j·den − Σ_i c_{basis(i)} rows[i][j]
        let mut obj = c[..width].iter().map(|v| v.mul(&self.den)).collect::<Step<Vec<T>>>()?;
        for (i, &b) in self.basis.iter().enumerate() {
            if !c[b].is_zero() {
                for (j, a) in self.rows[i].iter().enumerate() {
                    if !a.is_zero() {
                        obj[j] = T::sub_mul(&obj[j], &c[b], a)?;
                    }
                }
            }
        }
        let mut in_basis = vec![false; width];
        for &b in &self.basis {
            in_basis[b] = true;
        }
        let mut degenerate = 0usize;
        loop {
            let candidates = (0..limit).filter(|&j| !in_basis[j] && obj[j].is_positive());
            let entering = if degenerate > 8 {
                candidates.min()
            } else {
                candidates.fold(None, |best: Option<usize>, j| match best {
                    Some(b) if obj[b] >= obj[j] => Some(b),
                    _ => Some(j),
                })
            };
            let Some(e) = entering else { return Ok(None) };
            // least ratio rhs_i / rows[i][e], ties to the smallest basic index
            let mut best: Option<usize> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][e].is_positive() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(k) => {
                        let lhs = self.rhs[i].mul(&self.rows[k][e])?;
                        let rhs = self.rhs[k].mul(&self.rows[i][e])?;
                        lhs < rhs || (lhs == rhs && self.basis[i] < self.basis[k])
                    }
                };
                if better {
                    best = Some(i);
                }
            }
            let Some(r) = best else { return Ok(Some(e)) };
            degenerate = if self.rhs[r].is_zero() { degenerate + 1 } else { 0 };
            in_basis[self.basis[r]] = false;
            in_basis[e] = true;
            self.pivot(r, e, Some(&mut obj))?;
        }
    }

    /// Phase one on integer rows with nonnegative right-hand sides. `None` iff infeasible.
    fn feasible(a: &[Vec<BigInt>], b: &[BigInt], n: usize) -> Step<Option<Self>> {
        let m = a.len();
        let (one, zero) = (T::lift(&BigInt::one())?, T::zero());
        let mut rows = Vec::with_capacity(m);
        for (i, row) in a.iter().enumerate() {
            let mut r = row.iter().map(T::lift).collect::<Step<Vec<T>>>()?;
            r.extend((0..m).map(|k| if k == i { one.clone() } else { zero.clone() }));
            rows.push(r);
        }
        let rhs = b.iter().map(T::lift).collect::<Step<Vec<T>>>()?;
        let mut t = Tableau { n, rows, rhs, den: one.clone(), basis: (n..n + m).collect() };
        let c: Vec<T> = (0..n + m).map(|j| if j < n { zero.clone() } else { one.neg().expect("small") }).collect();
        t.optimize(&c, n + m)?;
        if t.rhs.iter().zip(&t.basis).any(|(v, &bj)| bj >= n && !v.is_zero()) {
            return Ok(None);
        }
        // drive artificial columns out of the basis, dropping redundant rows
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= n {
                if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, j, None)?;
                } else {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
        for r in &mut t.rows {
            r.truncate(n);
        }
        Ok(Some(t))
    }

    fn value(&self, v: &T) -> Q {
        Q::new(v.big(), self.den.big())
    }

    fn point(&self) -> Vec<Q> {
        let mut x = vec![Q::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.value(&self.rhs[i]);
        }
        x
    }

    fn maximize(&mut self, c: &[BigInt], original: &[Q]) -> Step<LpOutcome> {
        let c = c.iter().map(T::lift).collect::<Step<Vec<T>>>()?;
        Ok(match self.optimize(&c, self.n)? {
            None => {
                let point = self.point();
                let value = point.iter().zip(original).map(|(x, w)| x * w).sum();
                LpOutcome::Optimal { point, value }
            }
            Some(e) => {
                let mut ray = vec![Q::zero(); self.n];
                ray[e] = Q::one();
                for (i, &b) in self.basis.iter().enumerate() {
                    ray[b] = -self.value(&self.rows[i][e]);
                }
                LpOutcome::Unbounded { point: self.point(), ray }
            }
        })
    }
}

/// Multiplies a rational row through by the lcm of its denominators.
fn integer_row(row: &[Q], b: &Q) -> (Vec<BigInt>, BigInt) {
    let l = row.iter().chain(std::iter::once(b)).fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let scale = |v: &Q| (v * Q::from_integer(l.clone())).to_integer();
    (row.iter().map(scale).collect(), scale(b))
}

#[derive(Clone, Debug)]
enum Engine {
    Small(Tableau<i128>),
    Big(Tableau<BigInt>),
}

/// A feasible basis of `{x ≥ 0 : A x = b}`, kept across successive maximizations.
#[derive(Clone, Debug)]
pub struct Lp {
    a: Vec<Vec<BigInt>>,
    b: Vec<BigInt>,
    n: usize,
    /// Objectives maximized so far, replayed on a switch to `BigInt`.
    history: Vec<Vec<BigInt>>,
    engine: Engine,
}

impl Lp {
    /// Phase one. `None` iff the system is infeasible.
    pub fn feasible(a: &[Vec<Q>], b: &[Q], n: usize) -> Option<Lp> {
        let (mut ia, mut ib) = (Vec::with_capacity(a.len()), Vec::with_capacity(a.len()));
        for (row, v) in a.iter().zip(b) {
            let (mut r, mut v) = integer_row(row, v);
            if v.is_negative() {
                r.iter_mut().for_each(|x| *x = -&*x);
                v = -v;
            }
            ia.push(r);
            ib.push(v);
        }
        let engine = match Tableau::<i128>::feasible(&ia, &ib, n) {
            Ok(t) => Engine::Small(t?),
            Err(Overflow) => Engine::Big(Tableau::feasible(&ia, &ib, n).expect("no overflow")?),
        };
        Some(Lp { a: ia, b: ib, n, history: Vec::new(), engine })
    }

    fn promote(&mut self) -> &mut Tableau<BigInt> {
        if let Engine::Small(_) = self.engine {
            let mut t = Tableau::<BigInt>::feasible(&self.a, &self.b, self.n).expect("no overflow").expect("feasible");
            for c in &self.history {
                t.optimize(c, self.n).expect("no overflow");
            }
            self.engine = Engine::Big(t);
        }
        match &mut self.engine {
            Engine::Big(t) => t,
            Engine::Small(_) => unreachable!(),
        }
    }

    pub fn point(&self) -> Vec<Q> {
        match &self.engine {
            Engine::Small(t) => t.point(),
            Engine::Big(t) => t.point(),
        }
    }

    /// Maximizes `c·x` from the current basis.
    pub fn maximize(&mut self, c: &[Q]) -> LpOutcome {
        // a positive multiple of c with integer entries has the same optima
        let (scaled, _) = integer_row(c, &Q::zero());
        let small = match &mut self.engine {
            Engine::Small(t) => t.maximize(&scaled, c).ok(),
            Engine::Big(_) => None,
        };
        // an overflow leaves the small tableau half-updated; promote replays from scratch
        let out = match small {
            Some(out) => out,
            None => self.promote().maximize(&scaled, c).expect("no overflow"),
        };
        self.history.push(scaled);
        out
    }
}
