//! Symbolic value domain: linear expressions over input-byte variables.
//!
//! Values are `c0 + Σ ci·xi` with 64-bit wrapping coefficients — exactly the
//! arithmetic the VM performs, so solver evaluation is bit-faithful.
//! Multiplying two genuinely symbolic values leaves the linear domain and
//! becomes `Opaque`, which taints everything derived from it; paths forced
//! to branch on opaque values are reported truncated instead of guessed at.

/// Input model bound: at most this many symbolic input bytes.
pub const MAX_INPUT_VARS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinExpr {
    pub constant: u64,
    pub coeffs: [u64; MAX_INPUT_VARS],
}

impl LinExpr {
    pub fn constant(value: u64) -> Self {
        Self {
            constant: value,
            coeffs: [0; MAX_INPUT_VARS],
        }
    }

    pub fn var(index: usize) -> Self {
        let mut coeffs = [0; MAX_INPUT_VARS];
        coeffs[index] = 1;
        Self {
            constant: 0,
            coeffs,
        }
    }

    pub fn as_constant(&self) -> Option<u64> {
        if self.coeffs.iter().all(|&c| c == 0) {
            Some(self.constant)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = [0; MAX_INPUT_VARS];
        for (slot, (a, b)) in coeffs.iter_mut().zip(self.coeffs.iter().zip(&other.coeffs)) {
            *slot = a.wrapping_add(*b);
        }
        Self {
            constant: self.constant.wrapping_add(other.constant),
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut coeffs = [0; MAX_INPUT_VARS];
        for (slot, (a, b)) in coeffs.iter_mut().zip(self.coeffs.iter().zip(&other.coeffs)) {
            *slot = a.wrapping_sub(*b);
        }
        Self {
            constant: self.constant.wrapping_sub(other.constant),
            coeffs,
        }
    }

    /// Product, when it stays linear (at least one side constant).
    pub fn mul(&self, other: &Self) -> Option<Self> {
        let scale = |expr: &Self, k: u64| {
            let mut coeffs = [0; MAX_INPUT_VARS];
            for (slot, c) in coeffs.iter_mut().zip(&expr.coeffs) {
                *slot = c.wrapping_mul(k);
            }
            Self {
                constant: expr.constant.wrapping_mul(k),
                coeffs,
            }
        };
        match (self.as_constant(), other.as_constant()) {
            (Some(k), _) => Some(scale(other, k)),
            (_, Some(k)) => Some(scale(self, k)),
            (None, None) => None,
        }
    }

    /// Concrete value under an assignment (wrapping, like the VM).
    pub fn eval(&self, assignment: &[u8]) -> u64 {
        let mut v = self.constant;
        for (i, &coeff) in self.coeffs.iter().enumerate() {
            if coeff != 0 {
                let x = assignment.get(i).copied().unwrap_or(0) as u64;
                v = v.wrapping_add(coeff.wrapping_mul(x));
            }
        }
        v
    }

    /// Indices of variables with nonzero coefficients.
    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymValue {
    Linear(LinExpr),
    /// Escaped the linear domain (symbolic × symbolic).
    Opaque,
}

impl SymValue {
    pub fn constant(v: u64) -> Self {
        SymValue::Linear(LinExpr::constant(v))
    }

    pub fn input_var(i: usize) -> Self {
        SymValue::Linear(LinExpr::var(i))
    }

    pub fn as_linear(&self) -> Option<&LinExpr> {
        match self {
            SymValue::Linear(e) => Some(e),
            SymValue::Opaque => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (SymValue::Linear(a), SymValue::Linear(b)) => SymValue::Linear(a.add(b)),
            _ => SymValue::Opaque,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        match (self, other) {
            (SymValue::Linear(a), SymValue::Linear(b)) => SymValue::Linear(a.sub(b)),
            _ => SymValue::Opaque,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (SymValue::Linear(a), SymValue::Linear(b)) => match a.mul(b) {
                Some(product) => SymValue::Linear(product),
                None => SymValue::Opaque,
            },
            _ => SymValue::Opaque,
        }
    }
}

/// Comparison operators in path constraints (unsigned, like the VM).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Ge,
}

impl CmpOp {
    pub fn negate(self) -> Self {
        match self {
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Ge => CmpOp::Lt,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "≠",
            CmpOp::Lt => "<",
            CmpOp::Ge => "≥",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub lhs: LinExpr,
    pub op: CmpOp,
    pub rhs: LinExpr,
}

impl Constraint {
    pub fn holds(&self, assignment: &[u8]) -> bool {
        let l = self.lhs.eval(assignment);
        let r = self.rhs.eval(assignment);
        match self.op {
            CmpOp::Eq => l == r,
            CmpOp::Ne => l != r,
            CmpOp::Lt => l < r,
            CmpOp::Ge => l >= r,
        }
    }

    pub fn vars(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.lhs.vars().chain(self.rhs.vars()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn describe(&self) -> String {
        format!(
            "{} {} {}",
            describe_expr(&self.lhs),
            self.op.symbol(),
            describe_expr(&self.rhs)
        )
    }
}

fn describe_expr(e: &LinExpr) -> String {
    let mut parts = Vec::new();
    if e.constant != 0 || e.coeffs.iter().all(|&c| c == 0) {
        parts.push(e.constant.to_string());
    }
    for (i, &c) in e.coeffs.iter().enumerate() {
        match c {
            0 => {}
            1 => parts.push(format!("x{i}")),
            c => parts.push(format!("{c}·x{i}")),
        }
    }
    parts.join(" + ")
}

/// Conjunction of constraints accumulated along one path.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PathCondition {
    pub constraints: Vec<Constraint>,
}

impl PathCondition {
    pub fn with(&self, c: Constraint) -> Self {
        let mut next = self.clone();
        next.constraints.push(c);
        next
    }

    pub fn holds(&self, assignment: &[u8]) -> bool {
        self.constraints.iter().all(|c| c.holds(assignment))
    }

    pub fn describe(&self) -> String {
        if self.constraints.is_empty() {
            "⊤".to_string()
        } else {
            self.constraints
                .iter()
                .map(Constraint::describe)
                .collect::<Vec<_>>()
                .join(" ∧ ")
        }
    }
}
