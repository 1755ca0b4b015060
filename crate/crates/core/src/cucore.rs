//! The Cu-semigroup contract and the generic algorithms written against it.
//!
//! A model is a positively ordered abelian monoid with suprema of
//! increasing sequences, a compact-containment relation and a largest
//! element. Functionals on a model are accessed through a finite list of
//! *rays*: evaluation maps that, together with the ideal functionals, decide
//! every inequality `λ(x) ≤ r·λ(y)` over the whole functional space. Each
//! built-in model documents why its ray list has that property.

use std::fmt::{self, Debug};

use num_rational::BigRational;

use crate::scalar::ExtScalar;

/// An extreme evaluation map on a model.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ray {
    /// Point evaluation `δ_p` on a point-function model.
    Point(usize),
    /// The identity scaling on the perforated model.
    Scale,
    /// The `{0, ∞}`-valued ray of the idempotent model.
    Indicator,
    /// Dirac evaluation `δ_t` of the rank function of a spectral element.
    Dirac(BigRational),
    Left(Box<Ray>),
    Right(Box<Ray>),
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ray::Point(i) => write!(f, "point({i})"),
            Ray::Scale => f.write_str("scale"),
            Ray::Indicator => f.write_str("indicator"),
            Ray::Dirac(t) => write!(f, "dirac({t})"),
            Ray::Left(r) => write!(f, "left.{r}"),
            Ray::Right(r) => write!(f, "right.{r}"),
        }
    }
}

/// A concrete Cu-semigroup with a finite ray description of its functionals.
pub trait CuModel {
    type Elem: Clone + Debug + PartialEq;

    fn name(&self) -> String;

    fn zero(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    /// `n·x`; `0·x = 0`.
    fn scale(&self, x: &Self::Elem, n: u64) -> Self::Elem {
        (0..n).fold(self.zero(), |acc, _| self.add(&acc, x))
    }

    /// `∞·x = sup_n n·x`.
    fn infinity_times(&self, x: &Self::Elem) -> Self::Elem;

    fn largest(&self) -> Self::Elem;

    /// Decision procedure for `x ≪ y`.
    fn compactly_contained(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    /// A finite list of rays that is sufficient for every rank comparison
    /// among `elems`. Ray-free models return an empty list.
    fn rays_for(&self, elems: &[&Self::Elem]) -> Vec<Ray>;

    fn eval_ray(&self, ray: &Ray, x: &Self::Elem) -> ExtScalar;

    /// Human-readable ray name (labels instead of indices, where known).
    fn describe_ray(&self, ray: &Ray) -> String {
        ray.to_string()
    }

    /// Whether `x ≤ y` holds exactly when every ray satisfies `ray(x) ≤ ray(y)`.
    fn order_determined_by_rays(&self) -> bool;

    /// Whether rays plus ideal functionals decide all inequalities between
    /// ranks. Built-in models return `true`; external models must opt in.
    fn rays_complete(&self) -> bool {
        true
    }

    /// Closed-form `rc(S, w)` for full `w`, where known.
    fn rc_formula(&self, w: &Self::Elem) -> Option<ExtScalar> {
        let _ = w;
        self.order_determined_by_rays().then(ExtScalar::zero)
    }

    /// Closed-form radius with the strict, normalized premise, where known.
    fn rc_strict_formula(&self, w: &Self::Elem) -> Option<ExtScalar> {
        let _ = w;
        None
    }

    /// Every element of complexity at most `bound`, in a fixed order.
    fn enumerate(&self, bound: u64) -> Vec<Self::Elem>;

    /// Elements that are always tried as the larger side of a comparison in
    /// bounded searches, in addition to [`CuModel::enumerate`].
    fn extra_targets(&self, bound: u64) -> Vec<Self::Elem> {
        let _ = bound;
        vec![self.largest()]
    }

    /// The first `len` terms of a rapidly increasing sequence
    /// `x_1 ≪ x_2 ≪ …` with supremum `x`.
    fn canonical_chain(&self, x: &Self::Elem, len: usize) -> Vec<Self::Elem>;

    /// Render an element in the textual payload syntax.
    fn render(&self, x: &Self::Elem) -> String {
        format!("{x:?}")
    }
}

pub fn infinity_times<M: CuModel>(model: &M, x: &M::Elem) -> M::Elem {
    model.infinity_times(x)
}

/// `x` is full when `∞·x` is the largest element.
pub fn is_full<M: CuModel>(model: &M, x: &M::Elem) -> bool {
    model.leq(&model.largest(), &model.infinity_times(x))
}

pub fn compactly_contained<M: CuModel>(model: &M, x: &M::Elem, y: &M::Elem) -> bool {
    model.compactly_contained(x, y)
}

/// `y ∈ Idl(x)`, i.e. `y ≤ ∞·x`.
pub fn ideal_membership<M: CuModel>(model: &M, x: &M::Elem, y: &M::Elem) -> bool {
    model.leq(y, &model.infinity_times(x))
}

pub fn is_zero<M: CuModel>(model: &M, x: &M::Elem) -> bool {
    model.leq(x, &model.zero())
}

/// Supremum of an increasing sequence given by its law.
pub fn sup_of_chain<M: CuModel>(model: &M, chain: &ChainLaw<M::Elem>) -> M::Elem {
    match chain {
        ChainLaw::Eventually(terms) => terms.last().cloned().unwrap_or_else(|| model.zero()),
        ChainLaw::Multiples(b) => model.infinity_times(b),
    }
}

/// A closed-form presentation of an increasing sequence `x_1 ≤ x_2 ≤ …`.
#[derive(Clone, Debug, PartialEq)]
pub enum ChainLaw<E> {
    /// Listed terms `x_1, …, x_N`. Every rank ratio involving the sequence
    /// is constant from `x_N` on, so limits are read off the last term.
    /// For stabilizing sequences `x_n = x_N` for `n ≥ N`.
    Eventually(Vec<E>),
    /// `x_n = n·b`.
    Multiples(E),
}

impl<E: Clone> ChainLaw<E> {
    /// The `n`-th term (1-based), materialized through the model.
    pub fn term<M: CuModel<Elem = E>>(&self, model: &M, n: usize) -> E {
        assert!(n >= 1, "chains are indexed from 1");
        match self {
            ChainLaw::Eventually(terms) => terms[(n - 1).min(terms.len() - 1)].clone(),
            ChainLaw::Multiples(b) => model.scale(b, n as u64),
        }
    }

    /// Number of listed terms, or `None` for unbounded laws.
    pub fn listed_len(&self) -> Option<usize> {
        match self {
            ChainLaw::Eventually(terms) => Some(terms.len()),
            ChainLaw::Multiples(_) => None,
        }
    }
}

/// Checks `x_n ≤ x_{n+1} ≤ x` for a chain law, returning the first bad index.
pub fn check_increasing<M: CuModel>(
    model: &M,
    chain: &ChainLaw<M::Elem>,
    bound: &M::Elem,
) -> Result<(), usize> {
    match chain {
        ChainLaw::Eventually(terms) => {
            if terms.is_empty() {
                return Err(1);
            }
            for (i, pair) in terms.windows(2).enumerate() {
                if !model.leq(&pair[0], &pair[1]) {
                    return Err(i + 1);
                }
            }
            if let Some(i) = terms.iter().position(|t| !model.leq(t, bound)) {
                return Err(i + 1);
            }
            Ok(())
        }
        ChainLaw::Multiples(b) => {
            // b ≤ 2b gives n·b ≤ (n+1)·b for all n by compatibility with +.
            if !model.leq(b, &model.add(b, b)) {
                return Err(1);
            }
            if !model.leq(&model.infinity_times(b), bound) {
                return Err(1);
            }
            Ok(())
        }
    }
}
