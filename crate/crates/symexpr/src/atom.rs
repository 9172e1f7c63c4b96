//! Indeterminates of the polynomial ring.
//!
//! The derived ordering is the fixed total order used for canonical forms:
//! constants < coordinates < trig atoms < function derivatives, and
//! lexicographic by descriptor within each kind.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

pub type Symbol = Arc<str>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrigFn {
    Sin,
    Cos,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomKind {
    Constant(Symbol),
    Coordinate(Symbol),
    Trig { coordinate: Symbol, func: TrigFn },
    /// A partial derivative of a declared function; `orders[i]` counts the
    /// derivatives taken with respect to `args[i]`.
    Function {
        name: Symbol,
        args: Vec<Symbol>,
        orders: Vec<u32>,
    },
}

/// A cheaply clonable indeterminate. Atoms are interned, so structurally
/// equal atoms share one allocation and compare by pointer.
#[derive(Clone)]
pub struct Atom(Arc<AtomKind>);

fn interner() -> &'static Mutex<HashSet<Arc<AtomKind>>> {
    static TABLE: OnceLock<Mutex<HashSet<Arc<AtomKind>>>> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Atom {}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            Ordering::Equal
        } else {
            self.0.cmp(&other.0)
        }
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of differentiating a single atom with respect to a coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomDerivative {
    Zero,
    One,
    Atom(Atom),
    NegAtom(Atom),
}

impl Atom {
    pub fn new(kind: AtomKind) -> Self {
        let mut table = interner().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(existing) = table.get(&kind) {
            return Atom(existing.clone());
        }
        let arc = Arc::new(kind);
        table.insert(arc.clone());
        Atom(arc)
    }

    pub fn constant(name: &str) -> Self {
        Self::new(AtomKind::Constant(name.into()))
    }

    pub fn coordinate(name: &str) -> Self {
        Self::new(AtomKind::Coordinate(name.into()))
    }

    pub fn sin(coordinate: &str) -> Self {
        Self::new(AtomKind::Trig {
            coordinate: coordinate.into(),
            func: TrigFn::Sin,
        })
    }

    pub fn cos(coordinate: &str) -> Self {
        Self::new(AtomKind::Trig {
            coordinate: coordinate.into(),
            func: TrigFn::Cos,
        })
    }

    /// The underived function `name(args...)`.
    pub fn function<S: AsRef<str>>(name: &str, args: &[S]) -> Self {
        Self::function_derivative(name, args, &vec![0; args.len()])
    }

    pub fn function_derivative<S: AsRef<str>>(name: &str, args: &[S], orders: &[u32]) -> Self {
        assert_eq!(args.len(), orders.len(), "multi-index length must match argument count");
        Self::new(AtomKind::Function {
            name: name.into(),
            args: args.iter().map(|a| Symbol::from(a.as_ref())).collect(),
            orders: orders.to_vec(),
        })
    }

    pub fn kind(&self) -> &AtomKind {
        &self.0
    }

    pub fn is_cos(&self) -> bool {
        matches!(&*self.0, AtomKind::Trig { func: TrigFn::Cos, .. })
    }

    /// For `cos(x)` returns the matching `sin(x)`.
    pub fn sin_partner(&self) -> Option<Atom> {
        match &*self.0 {
            AtomKind::Trig { coordinate, func: TrigFn::Cos } => Some(Atom::new(AtomKind::Trig {
                coordinate: coordinate.clone(),
                func: TrigFn::Sin,
            })),
            _ => None,
        }
    }

    pub fn derivative(&self, coordinate: &str) -> AtomDerivative {
        match &*self.0 {
            AtomKind::Constant(_) => AtomDerivative::Zero,
            AtomKind::Coordinate(c) if &**c == coordinate => AtomDerivative::One,
            AtomKind::Coordinate(_) => AtomDerivative::Zero,
            AtomKind::Trig { coordinate: c, func } if &**c == coordinate => match func {
                TrigFn::Sin => AtomDerivative::Atom(Atom::cos(c)),
                TrigFn::Cos => AtomDerivative::NegAtom(Atom::sin(c)),
            },
            AtomKind::Trig { .. } => AtomDerivative::Zero,
            AtomKind::Function { name, args, orders } => {
                match args.iter().position(|a| &**a == coordinate) {
                    Some(pos) => {
                        let mut orders = orders.clone();
                        orders[pos] += 1;
                        AtomDerivative::Atom(Atom::new(AtomKind::Function {
                            name: name.clone(),
                            args: args.clone(),
                            orders,
                        }))
                    }
                    None => AtomDerivative::Zero,
                }
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            AtomKind::Constant(s) | AtomKind::Coordinate(s) => write!(f, "{s}"),
            AtomKind::Trig { coordinate, func } => {
                let name = match func {
                    TrigFn::Sin => "sin",
                    TrigFn::Cos => "cos",
                };
                write!(f, "{name}({coordinate})")
            }
            AtomKind::Function { name, args, orders } => {
                let call = format!("{}({})", name, args.join(","));
                let total: u32 = orders.iter().sum();
                if total == 0 {
                    return write!(f, "{call}");
                }
                if args.len() == 1 && total <= 2 {
                    let primes = "'".repeat(total as usize);
                    return write!(f, "{}{}({})", name, primes, args[0]);
                }
                write!(f, "diff({call}")?;
                for (arg, &k) in args.iter().zip(orders) {
                    match k {
                        0 => {}
                        1 => write!(f, ",{arg}")?,
                        k => write!(f, ",{arg},{k}")?,
                    }
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
