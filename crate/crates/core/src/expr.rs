//! Expression trees over chart symbols.
//!
//! Operators are `+  -  *  /` and `^` with a rational literal exponent;
//! functions are `sin`, `cos`, `sqrt`, `exp`, `atan2`. Construction goes
//! through the smart constructors below, which fold constants so that
//! derivatives stay compact. No rewriting beyond constant folding is done.

use std::fmt;
use std::sync::Arc;

pub type ExprRef = Arc<Expr>;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Neg(ExprRef),
    Add(ExprRef, ExprRef),
    Sub(ExprRef, ExprRef),
    Mul(ExprRef, ExprRef),
    Div(ExprRef, ExprRef),
    /// Power with a rational constant exponent.
    Pow(ExprRef, f64),
    Sin(ExprRef),
    Cos(ExprRef),
    Sqrt(ExprRef),
    Exp(ExprRef),
    Atan2(ExprRef, ExprRef),
}

pub fn constant(c: f64) -> ExprRef {
    Arc::new(Expr::Const(c))
}

pub fn var(i: usize) -> ExprRef {
    Arc::new(Expr::Var(i))
}

fn as_const(e: &ExprRef) -> Option<f64> {
    match **e {
        Expr::Const(c) => Some(c),
        _ => None,
    }
}

pub fn neg(a: &ExprRef) -> ExprRef {
    match &**a {
        Expr::Const(c) => constant(-c),
        Expr::Neg(inner) => inner.clone(),
        _ => Arc::new(Expr::Neg(a.clone())),
    }
}

pub fn add(a: &ExprRef, b: &ExprRef) -> ExprRef {
    match (as_const(a), as_const(b)) {
        (Some(x), Some(y)) if (x + y).is_finite() => return constant(x + y),
        (Some(x), None) if x == 0.0 => return b.clone(),
        (None, Some(y)) if y == 0.0 => return a.clone(),
        _ => {}
    }
    Arc::new(Expr::Add(a.clone(), b.clone()))
}

pub fn sub(a: &ExprRef, b: &ExprRef) -> ExprRef {
    match (as_const(a), as_const(b)) {
        (Some(x), Some(y)) if (x - y).is_finite() => return constant(x - y),
        (Some(x), None) if x == 0.0 => return neg(b),
        (None, Some(y)) if y == 0.0 => return a.clone(),
        _ => {}
    }
    Arc::new(Expr::Sub(a.clone(), b.clone()))
}

pub fn mul(a: &ExprRef, b: &ExprRef) -> ExprRef {
    match (as_const(a), as_const(b)) {
        (Some(x), Some(y)) if (x * y).is_finite() => return constant(x * y),
        (Some(x), None) => {
            if x == 0.0 {
                return constant(0.0);
            }
            if x == 1.0 {
                return b.clone();
            }
            if x == -1.0 {
                return neg(b);
            }
        }
        (None, Some(y)) => {
            if y == 0.0 {
                return constant(0.0);
            }
            if y == 1.0 {
                return a.clone();
            }
            if y == -1.0 {
                return neg(a);
            }
        }
        _ => {}
    }
    Arc::new(Expr::Mul(a.clone(), b.clone()))
}

pub fn div(a: &ExprRef, b: &ExprRef) -> ExprRef {
    match (as_const(a), as_const(b)) {
        (Some(x), Some(y)) if y != 0.0 && (x / y).is_finite() => return constant(x / y),
        (Some(x), None) if x == 0.0 => return constant(0.0),
        (None, Some(y)) if y == 1.0 => return a.clone(),
        (None, Some(y)) if y == -1.0 => return neg(a),
        _ => {}
    }
    Arc::new(Expr::Div(a.clone(), b.clone()))
}

pub fn pow(a: &ExprRef, r: f64) -> ExprRef {
    if r == 0.0 {
        return constant(1.0);
    }
    if r == 1.0 {
        return a.clone();
    }
    if let Some(c) = as_const(a) {
        let v = c.powf(r);
        if v.is_finite() {
            return constant(v);
        }
    }
    Arc::new(Expr::Pow(a.clone(), r))
}

macro_rules! unary_ctor {
    ($name:ident, $variant:ident, $fold:expr) => {
        pub fn $name(a: &ExprRef) -> ExprRef {
            if let Some(c) = as_const(a) {
                let f: fn(f64) -> f64 = $fold;
                let v = f(c);
                if v.is_finite() {
                    return constant(v);
                }
            }
            Arc::new(Expr::$variant(a.clone()))
        }
    };
}

unary_ctor!(sin, Sin, f64::sin);
unary_ctor!(cos, Cos, f64::cos);
unary_ctor!(sqrt, Sqrt, f64::sqrt);
unary_ctor!(exp, Exp, f64::exp);

pub fn atan2(y: &ExprRef, x: &ExprRef) -> ExprRef {
    if let (Some(a), Some(b)) = (as_const(y), as_const(x)) {
        if a != 0.0 || b != 0.0 {
            return constant(a.atan2(b));
        }
    }
    Arc::new(Expr::Atan2(y.clone(), x.clone()))
}

impl Expr {
    /// Evaluate at a coordinate vector. Domain violations (division by zero,
    /// sqrt of a negative, atan2 at the origin) surface as non-finite values.
    pub fn eval(&self, coords: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => coords[*i],
            Expr::Neg(a) => -a.eval(coords),
            Expr::Add(a, b) => a.eval(coords) + b.eval(coords),
            Expr::Sub(a, b) => a.eval(coords) - b.eval(coords),
            Expr::Mul(a, b) => a.eval(coords) * b.eval(coords),
            Expr::Div(a, b) => a.eval(coords) / b.eval(coords),
            Expr::Pow(a, r) => a.eval(coords).powf(*r),
            Expr::Sin(a) => a.eval(coords).sin(),
            Expr::Cos(a) => a.eval(coords).cos(),
            Expr::Sqrt(a) => a.eval(coords).sqrt(),
            Expr::Exp(a) => a.eval(coords).exp(),
            Expr::Atan2(y, x) => {
                let yv = y.eval(coords);
                let xv = x.eval(coords);
                if yv == 0.0 && xv == 0.0 {
                    f64::NAN
                } else {
                    yv.atan2(xv)
                }
            }
        }
    }

    /// Symbolic partial derivative with respect to symbol `i`.
    pub fn diff(self: &Arc<Self>, i: usize) -> ExprRef {
        match &**self {
            Expr::Const(_) => constant(0.0),
            Expr::Var(j) => constant(if *j == i { 1.0 } else { 0.0 }),
            Expr::Neg(a) => neg(&a.diff(i)),
            Expr::Add(a, b) => add(&a.diff(i), &b.diff(i)),
            Expr::Sub(a, b) => sub(&a.diff(i), &b.diff(i)),
            Expr::Mul(a, b) => add(&mul(&a.diff(i), b), &mul(a, &b.diff(i))),
            Expr::Div(a, b) => {
                // (a'b - ab') / b^2
                let num = sub(&mul(&a.diff(i), b), &mul(a, &b.diff(i)));
                div(&num, &pow(b, 2.0))
            }
            Expr::Pow(a, r) => {
                // r a^(r-1) a'
                mul(&mul(&constant(*r), &pow(a, r - 1.0)), &a.diff(i))
            }
            Expr::Sin(a) => mul(&cos(a), &a.diff(i)),
            Expr::Cos(a) => neg(&mul(&sin(a), &a.diff(i))),
            Expr::Sqrt(a) => div(&a.diff(i), &mul(&constant(2.0), &sqrt(a))),
            Expr::Exp(a) => mul(self, &a.diff(i)),
            Expr::Atan2(y, x) => {
                // (x y' - y x') / (x^2 + y^2)
                let num = sub(&mul(x, &y.diff(i)), &mul(y, &x.diff(i)));
                let den = add(&pow(x, 2.0), &pow(y, 2.0));
                div(&num, &den)
            }
        }
    }

    /// True when the tree references symbol `i` anywhere.
    pub fn depends_on(&self, i: usize) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(j) => *j == i,
            Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Sqrt(a) | Expr::Exp(a) => {
                a.depends_on(i)
            }
            Expr::Pow(a, _) => a.depends_on(i),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b)
            | Expr::Atan2(a, b) => a.depends_on(i) || b.depends_on(i),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }
}

// Printing uses minimal parentheses; printed output reparses to the same tree.
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => PREC_ADD,
        Expr::Mul(..) | Expr::Div(..) => PREC_MUL,
        Expr::Neg(..) => PREC_NEG,
        Expr::Pow(..) => PREC_POW,
        Expr::Const(c) if *c < 0.0 => PREC_NEG,
        _ => PREC_ATOM,
    }
}

pub(crate) struct DisplayWith<'a> {
    pub expr: &'a Expr,
    pub names: &'a [String],
}

impl fmt::Display for DisplayWith<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.names, 0)
    }
}

fn write_child(
    f: &mut fmt::Formatter<'_>,
    e: &Expr,
    names: &[String],
    min_prec: u8,
) -> fmt::Result {
    if precedence(e) < min_prec {
        write!(f, "(")?;
        write_expr(f, e, names, 0)?;
        write!(f, ")")
    } else {
        write_expr(f, e, names, 0)
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, names: &[String], _lvl: u8) -> fmt::Result {
    match e {
        Expr::Const(c) => write!(f, "{c:?}"),
        Expr::Var(i) => write!(f, "{}", names[*i]),
        Expr::Neg(a) => {
            write!(f, "-")?;
            write_child(f, a, names, PREC_NEG)
        }
        Expr::Add(a, b) => {
            write_child(f, a, names, PREC_ADD)?;
            write!(f, " + ")?;
            write_child(f, b, names, PREC_ADD + 1)
        }
        Expr::Sub(a, b) => {
            write_child(f, a, names, PREC_ADD)?;
            write!(f, " - ")?;
            write_child(f, b, names, PREC_ADD + 1)
        }
        Expr::Mul(a, b) => {
            write_child(f, a, names, PREC_MUL)?;
            write!(f, "*")?;
            write_child(f, b, names, PREC_MUL + 1)
        }
        Expr::Div(a, b) => {
            write_child(f, a, names, PREC_MUL)?;
            write!(f, "/")?;
            write_child(f, b, names, PREC_MUL + 1)
        }
        Expr::Pow(a, r) => {
            write_child(f, a, names, PREC_ATOM)?;
            write!(f, "^{r:?}")
        }
        Expr::Sin(a) => write_call(f, "sin", &[a], names),
        Expr::Cos(a) => write_call(f, "cos", &[a], names),
        Expr::Sqrt(a) => write_call(f, "sqrt", &[a], names),
        Expr::Exp(a) => write_call(f, "exp", &[a], names),
        Expr::Atan2(y, x) => write_call(f, "atan2", &[y, x], names),
    }
}

fn write_call(
    f: &mut fmt::Formatter<'_>,
    name: &str,
    args: &[&ExprRef],
    names: &[String],
) -> fmt::Result {
    write!(f, "{name}(")?;
    for (k, a) in args.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write_expr(f, a, names, 0)?;
    }
    write!(f, ")")
}
