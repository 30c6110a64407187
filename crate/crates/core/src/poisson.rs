//! Exact polynomial Poisson brackets on `(R^3)^n` with the product `so(3)`
//! structure and on `gl(m)^*` with the coadjoint structure, together with the
//! quadratic Hamiltonians that represent the Kohno relations.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::coeff::{format_q, parse_q, qi, to_f64, Q};
use crate::error::{AlgebraError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Structure {
    /// `n` particles with coordinates `x_i, y_i, z_i`.
    So3 { n: usize },
    /// Coordinates `x_ij`, `1 <= i, j <= m`.
    Gl { m: usize },
}

impl Structure {
    pub fn num_vars(&self) -> usize {
        match *self {
            Structure::So3 { n } => 3 * n,
            Structure::Gl { m } => m * m,
        }
    }

    /// Number of indices the Hamiltonians `Δ_ij` range over.
    pub fn points(&self) -> usize {
        match *self {
            Structure::So3 { n } => n,
            Structure::Gl { m } => m,
        }
    }

    pub fn var_name(&self, v: usize) -> String {
        match *self {
            Structure::So3 { .. } => format!("{}{}", ["x", "y", "z"][v % 3], v / 3 + 1),
            Structure::Gl { m } => format!("x{}_{}", v / m + 1, v % m + 1),
        }
    }

    pub fn parse_var(&self, name: &str) -> Option<usize> {
        match *self {
            Structure::So3 { n } => {
                let c = ["x", "y", "z"].iter().position(|p| name.starts_with(p))?;
                let i: usize = name[1..].parse().ok()?;
                (1..=n).contains(&i).then_some(3 * (i - 1) + c)
            }
            Structure::Gl { m } => {
                let (i, j) = name.strip_prefix('x')?.split_once('_')?;
                let (i, j): (usize, usize) = (i.parse().ok()?, j.parse().ok()?);
                ((1..=m).contains(&i) && (1..=m).contains(&j)).then_some((i - 1) * m + j - 1)
            }
        }
    }

    /// so(3) variable index of coordinate `c` (0, 1, 2) of particle `i`.
    pub fn so3_var(i: usize, c: usize) -> usize {
        3 * (i - 1) + c
    }

    /// `{u, v}` for coordinate functions, as `(coefficient, variable)` pairs.
    fn var_bracket(&self, u: usize, v: usize) -> Vec<(i64, usize)> {
        match *self {
            Structure::So3 { .. } => {
                if u / 3 != v / 3 {
                    return Vec::new();
                }
                let (a, b) = (u % 3, v % 3);
                let base = u - a;
                // {x,y}=z, {y,z}=x, {z,x}=y
                if (a + 1) % 3 == b {
                    vec![(1, base + (a + 2) % 3)]
                } else if (b + 1) % 3 == a {
                    vec![(-1, base + (b + 2) % 3)]
                } else {
                    Vec::new()
                }
            }
            Structure::Gl { m } => {
                let (i, j, k, l) = (u / m, u % m, v / m, v % m);
                let mut out = Vec::new();
                if j == k {
                    out.push((1, i * m + l));
                }
                if l == i {
                    out.push((-1, k * m + j));
                }
                out
            }
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Structure::So3 { n } => format!("so3^{n}"),
            Structure::Gl { m } => format!("gl({m})"),
        }
    }

    pub fn parse(label: &str) -> Result<Structure> {
        let t = label.trim();
        let bad = || AlgebraError::parse("structure", format!("expected \"so3^n\" or \"gl(m)\", got {t:?}"));
        if let Some(n) = t.strip_prefix("so3^") {
            let n: usize = n.parse().map_err(|_| bad())?;
            if n >= 1 {
                return Ok(Structure::So3 { n });
            }
        } else if let Some(m) = t.strip_prefix("gl(").and_then(|r| r.strip_suffix(')')) {
            let m: usize = m.parse().map_err(|_| bad())?;
            if m >= 1 {
                return Ok(Structure::Gl { m });
            }
        }
        Err(bad())
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

type Exps = Vec<u16>;

/// Polynomial over a structure's coordinates; no zero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFunction {
    structure: Structure,
    terms: BTreeMap<Exps, Q>,
}

impl PolyFunction {
    pub fn zero(structure: Structure) -> PolyFunction {
        PolyFunction {
            structure,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(structure: Structure, c: Q) -> PolyFunction {
        let mut p = PolyFunction::zero(structure);
        p.add_term(vec![0; structure.num_vars()], c);
        p
    }

    pub fn var(structure: Structure, v: usize) -> Result<PolyFunction> {
        if v >= structure.num_vars() {
            return Err(AlgebraError::InvalidArgument(format!("no variable {v} in {structure}")));
        }
        let mut e = vec![0; structure.num_vars()];
        e[v] = 1;
        let mut p = PolyFunction::zero(structure);
        p.add_term(e, Q::one());
        Ok(p)
    }

    pub fn var_named(structure: Structure, name: &str) -> Result<PolyFunction> {
        let v = structure
            .parse_var(name)
            .ok_or_else(|| AlgebraError::InvalidArgument(format!("no variable {name:?} in {structure}")))?;
        PolyFunction::var(structure, v)
    }

    /// Builds from `(exponents, coefficient)` pairs.
    pub fn from_terms(structure: Structure, terms: impl IntoIterator<Item = (Vec<u16>, Q)>) -> Result<PolyFunction> {
        let mut p = PolyFunction::zero(structure);
        for (e, c) in terms {
            if e.len() != structure.num_vars() {
                return Err(AlgebraError::InvalidArgument(format!(
                    "exponent vector of length {} for {structure}",
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exps, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &Q)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    fn check(&self, other: &PolyFunction) -> Result<()> {
        if self.structure != other.structure {
            return Err(AlgebraError::InvalidArgument(format!(
                "structure mismatch: {} vs {}",
                self.structure, other.structure
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyFunction) -> Result<PolyFunction> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PolyFunction) -> Result<PolyFunction> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PolyFunction {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, k: &Q) -> PolyFunction {
        let mut out = PolyFunction::zero(self.structure);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &PolyFunction) -> Result<PolyFunction> {
        self.check(other)?;
        let mut out = PolyFunction::zero(self.structure);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(e, x * y);
            }
        }
        Ok(out)
    }

    pub fn derivative(&self, v: usize) -> PolyFunction {
        let mut out = PolyFunction::zero(self.structure);
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut d = e.clone();
                d[v] -= 1;
                out.add_term(d, c * qi(e[v] as i64));
            }
        }
        out
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .filter(|(k, _)| **k > 0)
                    .map(|(&k, x)| x.powi(k as i32))
                    .product::<f64>()
                    * to_f64(c)
            })
            .sum()
    }

    pub fn to_json_value(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let exps: Map<String, Value> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, k)| **k > 0)
                    .map(|(v, k)| (self.structure.var_name(v), json!(k)))
                    .collect();
                json!({"exps": exps, "coeff": format_q(c)})
            })
            .collect();
        json!({"structure": self.structure.label(), "terms": terms})
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("polynomial serializes")
    }

    pub fn from_json_value(v: &Value) -> Result<PolyFunction> {
        let structure = v
            .get("structure")
            .and_then(Value::as_str)
            .ok_or_else(|| AlgebraError::parse("structure", "missing or not a string"))
            .and_then(Structure::parse)?;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| AlgebraError::parse("terms", "missing or not an array"))?;
        let mut p = PolyFunction::zero(structure);
        for (k, t) in terms.iter().enumerate() {
            let exps = t
                .get("exps")
                .and_then(Value::as_object)
                .ok_or_else(|| AlgebraError::parse(format!("terms[{k}].exps"), "missing or not an object"))?;
            let mut e = vec![0u16; structure.num_vars()];
            for (name, x) in exps {
                let field = format!("terms[{k}].exps.{name}");
                let var = structure
                    .parse_var(name)
                    .ok_or_else(|| AlgebraError::parse(&field, format!("unknown variable for {structure}")))?;
                let x = x
                    .as_u64()
                    .and_then(|x| u16::try_from(x).ok())
                    .ok_or_else(|| AlgebraError::parse(&field, "exponent must be a small nonnegative integer"))?;
                e[var] += x;
            }
            let c = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| AlgebraError::parse(format!("terms[{k}].coeff"), "missing or not a string"))
                .and_then(|s| {
                    parse_q(s).map_err(|err| AlgebraError::parse(format!("terms[{k}].coeff"), err.to_string()))
                })?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn from_json(text: &str) -> Result<PolyFunction> {
        let v: Value = serde_json::from_str(text).map_err(|e| AlgebraError::parse("json", e.to_string()))?;
        PolyFunction::from_json_value(&v)
    }
}

impl fmt::Display for PolyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => write!(f, "*{}", self.structure.var_name(v))?,
                    _ => write!(f, "*{}^{x}", self.structure.var_name(v))?,
                }
            }
        }
        Ok(())
    }
}

/// `{f, g} = Σ_{u,v} {u, v} ∂f/∂u ∂g/∂v`.
pub fn poisson_bracket(f: &PolyFunction, g: &PolyFunction) -> Result<PolyFunction> {
    f.check(g)?;
    let s = f.structure;
    let nv = s.num_vars();
    let df: Vec<PolyFunction> = (0..nv).map(|u| f.derivative(u)).collect();
    let dg: Vec<PolyFunction> = (0..nv).map(|v| g.derivative(v)).collect();
    let mut out = PolyFunction::zero(s);
    for u in (0..nv).filter(|&u| !df[u].is_zero()) {
        for v in (0..nv).filter(|&v| !dg[v].is_zero()) {
            let uv = s.var_bracket(u, v);
            if uv.is_empty() {
                continue;
            }
            let prod = df[u].mul(&dg[v])?;
            for (k, w) in uv {
                out = out.add(&prod.mul(&PolyFunction::var(s, w)?)?.scale(&qi(k)))?;
            }
        }
    }
    Ok(out)
}

/// `Δ_ij`, `i < j`, keyed by `(i, j)`: `<r_i, r_j>` for `so(3)^n`,
/// `2 x_ij x_ji` for `gl(m)`.
pub fn build_hamiltonians(structure: Structure) -> Result<BTreeMap<(usize, usize), PolyFunction>> {
    let n = structure.points();
    if n < 2 {
        return Err(AlgebraError::InvalidArgument(format!(
            "{structure} has fewer than two indices"
        )));
    }
    let mut out = BTreeMap::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.insert((i, j), hamiltonian(structure, i, j)?);
        }
    }
    Ok(out)
}

/// `Δ_ij` for any `i ≠ j`; symmetric in `i, j`.
pub fn hamiltonian(structure: Structure, i: usize, j: usize) -> Result<PolyFunction> {
    let n = structure.points();
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(AlgebraError::InvalidArgument(format!(
            "no Hamiltonian ({i},{j}) for {structure}"
        )));
    }
    match structure {
        Structure::So3 { .. } => {
            let mut h = PolyFunction::zero(structure);
            for c in 0..3 {
                let a = PolyFunction::var(structure, Structure::so3_var(i, c))?;
                let b = PolyFunction::var(structure, Structure::so3_var(j, c))?;
                h = h.add(&a.mul(&b)?)?;
            }
            Ok(h)
        }
        Structure::Gl { m } => {
            let a = PolyFunction::var(structure, (i - 1) * m + j - 1)?;
            let b = PolyFunction::var(structure, (j - 1) * m + i - 1)?;
            Ok(a.mul(&b)?.scale(&qi(2)))
        }
    }
}

/// `|r_i|^2` for `so(3)^n`.
pub fn radius_squared(n: usize, i: usize) -> Result<PolyFunction> {
    let s = Structure::So3 { n };
    let mut h = PolyFunction::zero(s);
    for c in 0..3 {
        let a = PolyFunction::var(s, Structure::so3_var(i, c))?;
        h = h.add(&a.mul(&a)?)?;
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoissonCheck {
    pub relation: String,
    pub holds: bool,
    /// number of nonzero terms left in the bracket
    pub residual_terms: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoissonReport {
    pub structure: Structure,
    pub checks: Vec<PoissonCheck>,
}

impl PoissonReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &PoissonCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "structure": self.structure.label(),
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "relation": c.relation,
                "holds": c.holds,
                "residual_terms": c.residual_terms,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks the Kohno relations for the structure's own Hamiltonians.
pub fn verify_kohno_poisson(structure: Structure) -> Result<PoissonReport> {
    verify_hamiltonians(structure, &build_hamiltonians(structure)?)
}

/// Exact check of `{Δ_ij, Δ_kl} = 0` for disjoint pairs and
/// `{Δ_ij, Δ_ik + Δ_jk} = 0` for every triple and bracketed pair.
pub fn verify_hamiltonians(
    structure: Structure,
    hams: &BTreeMap<(usize, usize), PolyFunction>,
) -> Result<PoissonReport> {
    let n = structure.points();
    let get = |i: usize, j: usize| {
        hams.get(&(i.min(j), i.max(j)))
            .ok_or_else(|| AlgebraError::InvalidArgument(format!("missing Hamiltonian D{}{}", i.min(j), i.max(j))))
    };
    let mut checks = Vec::new();
    let mut push = |relation: String, b: PolyFunction| {
        checks.push(PoissonCheck {
            relation,
            holds: b.is_zero(),
            residual_terms: b.len(),
        })
    };
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    for (p, &(i, j)) in pairs.iter().enumerate() {
        for &(k, l) in &pairs[p + 1..] {
            if i != k && i != l && j != k && j != l {
                push(
                    format!("{{D{i}{j}, D{k}{l}}} = 0"),
                    poisson_bracket(get(i, j)?, get(k, l)?)?,
                );
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for (a, b, c) in [
                    ((i, j), (i, k), (j, k)),
                    ((i, k), (i, j), (j, k)),
                    ((j, k), (i, j), (i, k)),
                ] {
                    let sum = get(b.0, b.1)?.add(get(c.0, c.1)?)?;
                    push(
                        format!("{{D{}{}, D{}{} + D{}{}}} = 0", a.0, a.1, b.0, b.1, c.0, c.1),
                        poisson_bracket(get(a.0, a.1)?, &sum)?,
                    );
                }
            }
        }
    }
    Ok(PoissonReport { structure, checks })
}

/// `v ↦ {v, H}` for every coordinate `v`: the Hamiltonian vector field.
pub fn hamiltonian_vector_field(h: &PolyFunction) -> Result<Vec<PolyFunction>> {
    let s = h.structure;
    (0..s.num_vars())
        .map(|v| poisson_bracket(&PolyFunction::var(s, v)?, h))
        .collect()
}
