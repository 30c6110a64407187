//! Numerical layer: KZ monodromy of loops of point configurations, the
//! pure-braid relations, and Hamiltonian flows on products of spheres.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use crate::coeff::{format_q, parse_q, q, qi, to_f64, Q};
use crate::error::{AlgebraError, Result};
use crate::freealg::Letter;
use crate::poisson::{hamiltonian, hamiltonian_vector_field, PolyFunction, Structure};
use crate::represent::{max_abs_complex, to_complex, CMatrix, MatrixRep};

pub const DEFAULT_HBAR: f64 = 0.1;
pub const DEFAULT_KZ_TOL: f64 = 1e-10;
pub const DEFAULT_FLOW_STEP: f64 = 1e-3;

/// Exact point of the complex plane.
pub type QPoint = (Q, Q);

fn cpoint(p: &QPoint) -> Complex64 {
    Complex64::new(to_f64(&p.0), to_f64(&p.1))
}

/// A smooth curve on the parameter interval `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Curve {
    /// From the point's current position to `to`.
    Line { to: QPoint },
    /// `center + radius·exp(2πi(start_turn + sweep_turns·τ))`.
    Arc {
        center: QPoint,
        radius: Q,
        start_turn: Q,
        sweep_turns: Q,
    },
}

/// One point moving along a curve.
#[derive(Clone, Debug, PartialEq)]
pub struct Move {
    /// 1-based point index
    pub point: usize,
    pub curve: Curve,
}

/// Moves performed simultaneously; all other points stay put.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub moves: Vec<Move>,
}

/// Evaluated curve: position and derivative at `τ`.
#[derive(Clone, Copy, Debug)]
enum Path {
    Line {
        from: Complex64,
        to: Complex64,
    },
    Arc {
        center: Complex64,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl Path {
    fn at(&self, tau: f64) -> (Complex64, Complex64) {
        match *self {
            Path::Line { from, to } => (from + (to - from) * tau, to - from),
            Path::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let theta = 2.0 * PI * (start + sweep * tau);
                let e = Complex64::from_polar(radius, theta);
                (center + e, e * Complex64::new(0.0, 2.0 * PI * sweep))
            }
        }
    }
}

/// Closed loop in the configuration space of `n` distinct points of `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigLoop {
    n: usize,
    base: Vec<QPoint>,
    pieces: Vec<Piece>,
    metadata: BTreeMap<String, String>,
    /// per piece, the evaluated curve of every moving point
    paths: Vec<Vec<(usize, PathData)>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct PathData {
    kind: u8,
    a: Complex64,
    b: Complex64,
    radius: f64,
    start: f64,
    sweep: f64,
}

impl PathData {
    fn path(&self) -> Path {
        if self.kind == 0 {
            Path::Line {
                from: self.a,
                to: self.b,
            }
        } else {
            Path::Arc {
                center: self.a,
                radius: self.radius,
                start: self.start,
                sweep: self.sweep,
            }
        }
    }
}

const CLOSE_TOL: f64 = 1e-12;
/// Samples per piece for the separation and winding diagnostics.
const SAMPLES: usize = 400;

impl ConfigLoop {
    /// Validates continuity, closure and pairwise separation.
    pub fn new(n: usize, base: Vec<QPoint>, pieces: Vec<Piece>) -> Result<ConfigLoop> {
        if n < 2 || base.len() != n {
            return Err(AlgebraError::InvalidArgument(format!(
                "loop needs n >= 2 base points (n={n}, got {})",
                base.len()
            )));
        }
        let mut pos: Vec<Complex64> = base.iter().map(cpoint).collect();
        let mut paths = Vec::with_capacity(pieces.len());
        for (pi, piece) in pieces.iter().enumerate() {
            let mut evaluated = Vec::new();
            for mv in &piece.moves {
                if mv.point == 0 || mv.point > n {
                    return Err(AlgebraError::InvalidArgument(format!(
                        "piece {pi}: no point {} in a loop of {n} points",
                        mv.point
                    )));
                }
                if evaluated.iter().any(|(k, _)| *k == mv.point) {
                    return Err(AlgebraError::InvalidArgument(format!(
                        "piece {pi}: point {} moves twice",
                        mv.point
                    )));
                }
                let cur = pos[mv.point - 1];
                let data = match &mv.curve {
                    Curve::Line { to } => PathData {
                        kind: 0,
                        a: cur,
                        b: cpoint(to),
                        radius: 0.0,
                        start: 0.0,
                        sweep: 0.0,
                    },
                    Curve::Arc {
                        center,
                        radius,
                        start_turn,
                        sweep_turns,
                    } => {
                        let d = PathData {
                            kind: 1,
                            a: cpoint(center),
                            b: Complex64::zero(),
                            radius: to_f64(radius),
                            start: to_f64(start_turn),
                            sweep: to_f64(sweep_turns),
                        };
                        if (d.path().at(0.0).0 - cur).norm() > CLOSE_TOL {
                            return Err(AlgebraError::InvalidArgument(format!(
                                "piece {pi}: arc of point {} does not start at its current position",
                                mv.point
                            )));
                        }
                        d
                    }
                };
                pos[mv.point - 1] = data.path().at(1.0).0;
                evaluated.push((mv.point, data));
            }
            paths.push(evaluated);
        }
        for (k, b) in base.iter().enumerate() {
            if (pos[k] - cpoint(b)).norm() > CLOSE_TOL {
                return Err(AlgebraError::InvalidArgument(format!(
                    "loop does not close: point {} ends elsewhere",
                    k + 1
                )));
            }
        }
        let mut lp = ConfigLoop {
            n,
            base,
            pieces,
            metadata: BTreeMap::new(),
            paths,
        };
        let sep = lp.min_separation();
        if sep < 1e-6 {
            return Err(AlgebraError::InvalidArgument(format!(
                "points collide along the loop (sampled separation {sep:e})"
            )));
        }
        lp.metadata.insert("min_separation".into(), format!("{sep:.6}"));
        Ok(lp)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn with_metadata(mut self, key: &str, value: &str) -> ConfigLoop {
        self.metadata.insert(key.into(), value.into());
        self
    }

    /// Positions and velocities of all points at parameter `τ` of piece `p`.
    fn state(&self, start: &[Complex64], p: usize, tau: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut x = start.to_vec();
        let mut v = vec![Complex64::zero(); self.n];
        for (k, d) in &self.paths[p] {
            let (a, b) = d.path().at(tau);
            x[k - 1] = a;
            v[k - 1] = b;
        }
        (x, v)
    }

    /// Start positions of every piece.
    fn piece_starts(&self) -> Vec<Vec<Complex64>> {
        let mut pos: Vec<Complex64> = self.base.iter().map(cpoint).collect();
        let mut out = Vec::with_capacity(self.pieces.len());
        for p in 0..self.pieces.len() {
            out.push(pos.clone());
            pos = self.state(&pos, p, 1.0).0;
        }
        out
    }

    /// Sampled minimum of `|μ_k − μ_l|` over the loop.
    pub fn min_separation(&self) -> f64 {
        let starts = self.piece_starts();
        let mut best = f64::INFINITY;
        for (p, s) in starts.iter().enumerate() {
            for i in 0..=SAMPLES {
                let (x, _) = self.state(s, p, i as f64 / SAMPLES as f64);
                for a in 0..self.n {
                    for b in a + 1..self.n {
                        best = best.min((x[a] - x[b]).norm());
                    }
                }
            }
        }
        if starts.is_empty() {
            let x: Vec<Complex64> = self.base.iter().map(cpoint).collect();
            for a in 0..self.n {
                for b in a + 1..self.n {
                    best = best.min((x[a] - x[b]).norm());
                }
            }
        }
        best
    }

    /// Winding number of `μ_k − μ_l` for `k < l`, from the sampled argument.
    pub fn winding_numbers(&self) -> BTreeMap<(usize, usize), f64> {
        let starts = self.piece_starts();
        let mut out = BTreeMap::new();
        for k in 1..=self.n {
            for l in k + 1..=self.n {
                let mut total = 0.0;
                for (p, s) in starts.iter().enumerate() {
                    let mut prev: Option<Complex64> = None;
                    for i in 0..=SAMPLES {
                        let (x, _) = self.state(s, p, i as f64 / SAMPLES as f64);
                        let z = x[l - 1] - x[k - 1];
                        if let Some(w) = prev {
                            total += (z / w).arg();
                        }
                        prev = Some(z);
                    }
                }
                out.insert((k, l), total / (2.0 * PI));
            }
        }
        out
    }

    /// Same loop traversed backwards.
    pub fn reversed(&self) -> ConfigLoop {
        let starts = self.piece_starts();
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (p, piece) in self.pieces.iter().enumerate().rev() {
            let moves = piece
                .moves
                .iter()
                .map(|mv| {
                    let curve = match &mv.curve {
                        Curve::Line { .. } => {
                            // the exact start of a line is the previous exact endpoint
                            Curve::Line {
                                to: self.exact_position_before(p, mv.point),
                            }
                        }
                        Curve::Arc {
                            center,
                            radius,
                            start_turn,
                            sweep_turns,
                        } => Curve::Arc {
                            center: center.clone(),
                            radius: radius.clone(),
                            start_turn: start_turn + sweep_turns,
                            sweep_turns: -sweep_turns.clone(),
                        },
                    };
                    Move { point: mv.point, curve }
                })
                .collect();
            pieces.push(Piece { moves });
        }
        let _ = starts;
        let mut lp = ConfigLoop::new(self.n, self.base.clone(), pieces).expect("reverse of a valid loop");
        lp.metadata = self.metadata.clone();
        lp
    }

    /// Exact position of `point` before piece `p`: the last line endpoint or
    /// the base point. Arcs in these loops are closed circles, so they do
    /// not change the exact position.
    fn exact_position_before(&self, p: usize, point: usize) -> QPoint {
        let mut pos = self.base[point - 1].clone();
        for piece in &self.pieces[..p] {
            for mv in &piece.moves {
                if mv.point == point {
                    match &mv.curve {
                        Curve::Line { to } => pos = to.clone(),
                        Curve::Arc {
                            center,
                            radius,
                            start_turn,
                            sweep_turns,
                        } => {
                            pos = exact_arc_point(center, radius, &(start_turn + sweep_turns)).unwrap_or(pos);
                        }
                    }
                }
            }
        }
        pos
    }

    /// Concatenation `self` then `other`; both must share the base point.
    pub fn then(&self, other: &ConfigLoop) -> Result<ConfigLoop> {
        if self.base != other.base {
            return Err(AlgebraError::InvalidArgument("loops have different base points".into()));
        }
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        ConfigLoop::new(self.n, self.base.clone(), pieces)
    }

    pub fn to_json_value(&self) -> Value {
        let pt = |p: &QPoint| json!([format_q(&p.0), format_q(&p.1)]);
        json!({
            "n": self.n,
            "base": self.base.iter().map(pt).collect::<Vec<_>>(),
            "pieces": self.pieces.iter().map(|piece| json!({
                "moves": piece.moves.iter().map(|mv| match &mv.curve {
                    Curve::Line { to } => json!({"point": mv.point, "line": {"to": pt(to)}}),
                    Curve::Arc { center, radius, start_turn, sweep_turns } => json!({
                        "point": mv.point,
                        "arc": {
                            "center": pt(center),
                            "radius": format_q(radius),
                            "start_turn": format_q(start_turn),
                            "sweep_turns": format_q(sweep_turns),
                        }
                    }),
                }).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "metadata": self.metadata,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("loop serializes")
    }

    pub fn from_json_value(v: &Value) -> Result<ConfigLoop> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| AlgebraError::parse("n", "missing or not an integer"))? as usize;
        let base_v = v
            .get("base")
            .and_then(Value::as_array)
            .ok_or_else(|| AlgebraError::parse("base", "missing or not an array"))?;
        let base = base_v
            .iter()
            .enumerate()
            .map(|(k, p)| parse_point(p, &format!("base[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        let pieces_v = v
            .get("pieces")
            .and_then(Value::as_array)
            .ok_or_else(|| AlgebraError::parse("pieces", "missing or not an array"))?;
        let mut pieces = Vec::new();
        for (pi, piece) in pieces_v.iter().enumerate() {
            let f = format!("pieces[{pi}].moves");
            let moves_v = piece
                .get("moves")
                .and_then(Value::as_array)
                .ok_or_else(|| AlgebraError::parse(&f, "missing or not an array"))?;
            let mut moves = Vec::new();
            for (mi, mv) in moves_v.iter().enumerate() {
                let f = format!("{f}[{mi}]");
                let point = mv
                    .get("point")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| AlgebraError::parse(format!("{f}.point"), "missing or not an integer"))?
                    as usize;
                let curve = if let Some(line) = mv.get("line") {
                    Curve::Line {
                        to: parse_point(line.get("to").unwrap_or(&Value::Null), &format!("{f}.line.to"))?,
                    }
                } else if let Some(arc) = mv.get("arc") {
                    let fq = |key: &str| -> Result<Q> {
                        let field = format!("{f}.arc.{key}");
                        arc.get(key)
                            .and_then(Value::as_str)
                            .ok_or_else(|| AlgebraError::parse(&field, "missing or not a string"))
                            .and_then(|s| parse_q(s).map_err(|e| AlgebraError::parse(&field, e.to_string())))
                    };
                    Curve::Arc {
                        center: parse_point(arc.get("center").unwrap_or(&Value::Null), &format!("{f}.arc.center"))?,
                        radius: fq("radius")?,
                        start_turn: fq("start_turn")?,
                        sweep_turns: fq("sweep_turns")?,
                    }
                } else {
                    return Err(AlgebraError::parse(&f, "needs a \"line\" or \"arc\""));
                };
                moves.push(Move { point, curve });
            }
            pieces.push(Piece { moves });
        }
        let mut lp = ConfigLoop::new(n, base, pieces)?;
        if let Some(meta) = v.get("metadata").and_then(Value::as_object) {
            for (k, x) in meta {
                if let Some(s) = x.as_str() {
                    lp.metadata.insert(k.clone(), s.to_string());
                }
            }
        }
        Ok(lp)
    }

    pub fn from_json(text: &str) -> Result<ConfigLoop> {
        let v: Value = serde_json::from_str(text).map_err(|e| AlgebraError::parse("json", e.to_string()))?;
        ConfigLoop::from_json_value(&v)
    }
}

fn parse_point(v: &Value, field: &str) -> Result<QPoint> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| AlgebraError::parse(field, "expected [re, im] fraction strings"))?;
    let c = |k: usize| -> Result<Q> {
        arr[k]
            .as_str()
            .ok_or_else(|| AlgebraError::parse(format!("{field}[{k}]"), "expected a fraction string"))
            .and_then(|s| parse_q(s).map_err(|e| AlgebraError::parse(format!("{field}[{k}]"), e.to_string())))
    };
    Ok((c(0)?, c(1)?))
}

/// Exact arc point for quarter-turn angles.
fn exact_arc_point(center: &QPoint, radius: &Q, turn: &Q) -> Option<QPoint> {
    let quarters = turn * qi(4);
    if !quarters.is_integer() {
        return None;
    }
    let k: num_bigint::BigInt = ((quarters.to_integer() % 4) + 4) % 4;
    let (dx, dy) = match k.to_string().as_str() {
        "0" => (radius.clone(), Q::zero()),
        "1" => (Q::zero(), radius.clone()),
        "2" => (-radius.clone(), Q::zero()),
        _ => (Q::zero(), -radius.clone()),
    };
    Some((&center.0 + dx, &center.1 + dy))
}

/// Base point `ξ_j = j`. Point `s` dips to `Im = -1/2`, passes below the
/// points strictly between `r` and `s`, rises to `r - i/4`, circles `ξ_r`
/// once counterclockwise at radius `1/4`, and returns the same way.
pub fn pure_braid_loop(n: usize, r: usize, s: usize) -> Result<ConfigLoop> {
    if !(1 <= r && r < s && s <= n) {
        return Err(AlgebraError::InvalidArgument(format!(
            "pure braid generator needs 1 <= r < s <= n (got r={r}, s={s}, n={n})"
        )));
    }
    let base: Vec<QPoint> = (1..=n).map(|j| (qi(j as i64), Q::zero())).collect();
    let (rq, sq) = (qi(r as i64), qi(s as i64));
    let line = |x: &Q, y: Q| Piece {
        moves: vec![Move {
            point: s,
            curve: Curve::Line { to: (x.clone(), y) },
        }],
    };
    let pieces = vec![
        line(&sq, q(-1, 2)),
        line(&rq, q(-1, 2)),
        line(&rq, q(-1, 4)),
        Piece {
            moves: vec![Move {
                point: s,
                curve: Curve::Arc {
                    center: (rq.clone(), Q::zero()),
                    radius: q(1, 4),
                    start_turn: q(-1, 4),
                    sweep_turns: Q::from_integer(1.into()),
                },
            }],
        },
        line(&rq, q(-1, 2)),
        line(&sq, q(-1, 2)),
        line(&sq, Q::zero()),
    ];
    Ok(ConfigLoop::new(n, base, pieces)?
        .with_metadata("generator", &format!("A{r}{s}"))
        .with_metadata(
            "convention",
            "base xi_j = j; point s travels in the lower half-plane (Im = -1/2) below the points between r and s, circles xi_r counterclockwise at radius 1/4 starting from r - i/4, and returns along the same route",
        ))
}

/// `n = 2` loop with `ξ_2 = 0` fixed and `ξ_1 = e^{2πiτ}`.
pub fn unit_circle_loop() -> ConfigLoop {
    let base = vec![(qi(1), Q::zero()), (Q::zero(), Q::zero())];
    let pieces = vec![Piece {
        moves: vec![Move {
            point: 1,
            curve: Curve::Arc {
                center: (Q::zero(), Q::zero()),
                radius: qi(1),
                start_turn: Q::zero(),
                sweep_turns: qi(1),
            },
        }],
    }];
    ConfigLoop::new(2, base, pieces).expect("valid loop")
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Dormand–Prince 5(4) for `E' = E A(τ)` on `[0, 1]`.
fn dp5<F: Fn(f64) -> CMatrix>(a: F, mut e: CMatrix, tol: f64, stats: &mut IntegrationStats) -> Result<CMatrix> {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let b5 = A[6];
    let mut t = 0.0f64;
    let mut h: f64 = 1.0 / 64.0;
    while t < 1.0 {
        h = h.min(1.0 - t);
        if h < 1e-14 {
            return Err(AlgebraError::InvalidArgument(format!(
                "step size underflow at parameter {t} (points too close?)"
            )));
        }
        let mut k: Vec<CMatrix> = Vec::with_capacity(7);
        for i in 0..7 {
            let mut stage = e.clone();
            for (j, kj) in k.iter().enumerate() {
                if A[i][j] != 0.0 {
                    stage += kj * Complex64::new(h * A[i][j], 0.0);
                }
            }
            k.push(stage * a(t + C[i] * h));
        }
        let mut next = e.clone();
        let mut err = CMatrix::zeros(e.nrows(), e.ncols());
        for i in 0..7 {
            if b5[i.min(5)] != 0.0 && i < 6 {
                next += &k[i] * Complex64::new(h * b5[i], 0.0);
            }
            let d = if i < 6 { b5[i] } else { 0.0 } - B4[i];
            if d != 0.0 {
                err += &k[i] * Complex64::new(h * d, 0.0);
            }
        }
        let scale = tol * max_abs_complex(&e).max(1.0);
        let ratio = max_abs_complex(&err) / scale;
        if ratio <= 1.0 {
            t += h;
            e = next;
            stats.accepted += 1;
        } else {
            stats.rejected += 1;
        }
        let factor = if ratio == 0.0 {
            5.0
        } else {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Ok(e)
}

/// `E(1)` for `E' = E·ħ Σ_{k<l} Δ_kl (μ_k' − μ_l')/(μ_k − μ_l)`, `E(0) = 1`,
/// integrated piece by piece with local tolerance `tol`.
pub fn kz_monodromy(lp: &ConfigLoop, rep: &MatrixRep, hbar: f64, tol: f64) -> Result<CMatrix> {
    Ok(kz_monodromy_stats(lp, rep, hbar, tol)?.0)
}

pub fn kz_monodromy_stats(
    lp: &ConfigLoop,
    rep: &MatrixRep,
    hbar: f64,
    tol: f64,
) -> Result<(CMatrix, IntegrationStats)> {
    if rep.n() != lp.n {
        return Err(AlgebraError::InvalidArgument(format!(
            "representation has n={} but the loop has n={}",
            rep.n(),
            lp.n
        )));
    }
    let d = rep.dim();
    let deltas: BTreeMap<(usize, usize), CMatrix> = rep
        .deltas()
        .map(|(l, m)| (l.indices(), to_complex(m) * Complex64::new(hbar, 0.0)))
        .collect();
    let nonzero: Vec<(usize, usize)> = deltas
        .iter()
        .filter(|(_, m)| max_abs_complex(m) > 0.0)
        .map(|(k, _)| *k)
        .collect();
    let mut e = CMatrix::identity(d, d);
    let mut stats = IntegrationStats::default();
    for (p, start) in lp.piece_starts().iter().enumerate() {
        let moving: Vec<usize> = lp.paths[p].iter().map(|(k, _)| *k).collect();
        let pairs: Vec<(usize, usize)> = nonzero
            .iter()
            .copied()
            .filter(|(k, l)| moving.contains(k) || moving.contains(l))
            .collect();
        if pairs.is_empty() {
            continue;
        }
        let a = |tau: f64| {
            let (x, v) = lp.state(start, p, tau);
            let mut m = CMatrix::zeros(d, d);
            for &(k, l) in &pairs {
                let c = (v[k - 1] - v[l - 1]) / (x[k - 1] - x[l - 1]);
                m += &deltas[&(k, l)] * c;
            }
            m
        };
        e = dp5(a, e, tol, &mut stats)?;
    }
    Ok((e, stats))
}

pub fn commutator_group(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let ai = a
        .clone()
        .try_inverse()
        .ok_or_else(|| AlgebraError::InvalidArgument("singular monodromy".into()))?;
    let bi = b
        .clone()
        .try_inverse()
        .ok_or_else(|| AlgebraError::InvalidArgument("singular monodromy".into()))?;
    Ok(a * b * ai * bi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BraidCheck {
    pub relation: String,
    pub deviation: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BraidRelationReport {
    pub checks: Vec<BraidCheck>,
    pub tol: f64,
}

impl BraidRelationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "passed": self.passed(),
            "tol": self.tol,
            "max_deviation": self.max_deviation(),
            "checks": self.checks.iter().map(|c| json!({
                "relation": c.relation,
                "deviation": c.deviation,
                "holds": c.holds,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Evaluates the pure-braid relations on monodromy matrices `A_rs`,
/// `{a, b} = a b a^{-1} b^{-1}`:
///
/// 1. `{A_rs, A_ik} = 1` if `s < i` or `k < r`;
/// 2. `{A_ks, A_ik} = {A_is^{-1}, A_ik}` if `i < k < s`;
/// 3. `{A_rk, A_ik} = {A_ik^{-1}, A_ir^{-1}}` if `i < r < k`;
/// 4. `{A_rs, A_ik} = {{A_is^{-1}, A_ir^{-1}}, A_ik}` if `i < r < k < s`;
///
/// plus centrality of the full twist `A_12 (A_13 A_23) ⋯ (A_1n ⋯ A_{n-1,n})`.
///
/// Monodromies multiply in the order loops are traversed, so the matrices
/// represent the opposite group; each word is evaluated reversed.
pub fn check_pure_braid_relations(
    monodromies: &BTreeMap<(usize, usize), CMatrix>,
    n: usize,
    tol: f64,
) -> Result<BraidRelationReport> {
    let get = |r: usize, s: usize| {
        monodromies
            .get(&(r, s))
            .cloned()
            .ok_or_else(|| AlgebraError::InvalidArgument(format!("missing monodromy A{r}{s}")))
    };
    let inv = |m: &CMatrix| {
        m.clone()
            .try_inverse()
            .ok_or_else(|| AlgebraError::InvalidArgument("singular monodromy".into()))
    };
    // {a, b} in the opposite group: b^{-1} a^{-1} b a
    let comm = |a: &CMatrix, b: &CMatrix| -> Result<CMatrix> { Ok(inv(b)? * inv(a)? * b * a) };
    let d = monodromies.values().next().map(|m| m.nrows()).unwrap_or(0);
    let id = CMatrix::identity(d, d);
    let mut checks = Vec::new();
    let mut push = |relation: String, lhs: CMatrix, rhs: CMatrix| {
        let deviation = max_abs_complex(&(lhs - rhs));
        checks.push(BraidCheck {
            relation,
            deviation,
            holds: deviation < tol,
        });
    };
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|r| (r + 1..=n).map(move |s| (r, s))).collect();
    for &(r, s) in &pairs {
        for &(i, k) in &pairs {
            if s < i || k < r {
                push(
                    format!("{{A{r}{s}, A{i}{k}}} = 1"),
                    comm(&get(r, s)?, &get(i, k)?)?,
                    id.clone(),
                );
            }
        }
    }
    for i in 1..=n {
        for k in i + 1..=n {
            for s in k + 1..=n {
                push(
                    format!("{{A{k}{s}, A{i}{k}}} = {{A{i}{s}^-1, A{i}{k}}}"),
                    comm(&get(k, s)?, &get(i, k)?)?,
                    comm(&inv(&get(i, s)?)?, &get(i, k)?)?,
                );
            }
        }
    }
    for i in 1..=n {
        for r in i + 1..=n {
            for k in r + 1..=n {
                push(
                    format!("{{A{r}{k}, A{i}{k}}} = {{A{i}{k}^-1, A{i}{r}^-1}}"),
                    comm(&get(r, k)?, &get(i, k)?)?,
                    comm(&inv(&get(i, k)?)?, &inv(&get(i, r)?)?)?,
                );
            }
        }
    }
    for i in 1..=n {
        for r in i + 1..=n {
            for k in r + 1..=n {
                for s in k + 1..=n {
                    push(
                        format!("{{A{r}{s}, A{i}{k}}} = {{{{A{i}{s}^-1, A{i}{r}^-1}}, A{i}{k}}}"),
                        comm(&get(r, s)?, &get(i, k)?)?,
                        comm(&comm(&inv(&get(i, s)?)?, &inv(&get(i, r)?)?)?, &get(i, k)?)?,
                    );
                }
            }
        }
    }
    let twist = full_twist(monodromies, n)?;
    for &(r, s) in &pairs {
        let a = get(r, s)?;
        push(format!("full twist commutes with A{r}{s}"), &twist * &a, &a * &twist);
    }
    Ok(BraidRelationReport { checks, tol })
}

/// Full twist `Π_{s=2}^{n} (A_1s A_2s ⋯ A_{s-1,s})` evaluated reversed.
pub fn full_twist(monodromies: &BTreeMap<(usize, usize), CMatrix>, n: usize) -> Result<CMatrix> {
    let d = monodromies.values().next().map(|m| m.nrows()).unwrap_or(0);
    let mut out = CMatrix::identity(d, d);
    for s in 2..=n {
        for r in 1..s {
            let a = monodromies
                .get(&(r, s))
                .ok_or_else(|| AlgebraError::InvalidArgument(format!("missing monodromy A{r}{s}")))?;
            out = a * out;
        }
    }
    Ok(out)
}

/// All `A_rs` monodromies of [`pure_braid_loop`].
pub fn all_monodromies(rep: &MatrixRep, hbar: f64, tol: f64) -> Result<BTreeMap<(usize, usize), CMatrix>> {
    let n = rep.n();
    let mut out = BTreeMap::new();
    for r in 1..=n {
        for s in r + 1..=n {
            out.insert((r, s), kz_monodromy(&pure_braid_loop(n, r, s)?, rep, hbar, tol)?);
        }
    }
    Ok(out)
}

/// Principal matrix logarithm by inverse scaling and squaring:
/// Denman–Beavers square roots until `‖X − I‖ < 1/4`, then the series.
pub fn matrix_log(m: &CMatrix) -> Result<CMatrix> {
    let d = m.nrows();
    let id = CMatrix::identity(d, d);
    let mut x = m.clone();
    let mut k = 0u32;
    while max_abs_complex(&(&x - &id)) * d as f64 >= 0.25 {
        if k > 40 {
            return Err(AlgebraError::InvalidArgument(
                "matrix log: square roots do not converge".into(),
            ));
        }
        x = sqrt_db(&x)?;
        k += 1;
    }
    let u = &x - &id;
    let mut term = u.clone();
    let mut sum = u.clone();
    for j in 2..=60 {
        term = &term * &u;
        let c = if j % 2 == 0 { -1.0 } else { 1.0 } / j as f64;
        sum += &term * Complex64::new(c, 0.0);
        if max_abs_complex(&term) < 1e-18 {
            break;
        }
    }
    Ok(sum * Complex64::new(2f64.powi(k as i32), 0.0))
}

fn sqrt_db(a: &CMatrix) -> Result<CMatrix> {
    let d = a.nrows();
    let mut y = a.clone();
    let mut z = CMatrix::identity(d, d);
    for _ in 0..100 {
        let yi = y
            .clone()
            .try_inverse()
            .ok_or_else(|| AlgebraError::InvalidArgument("matrix log: singular iterate (branch failure)".into()))?;
        let zi = z
            .clone()
            .try_inverse()
            .ok_or_else(|| AlgebraError::InvalidArgument("matrix log: singular iterate (branch failure)".into()))?;
        let ny = (&y + zi) * Complex64::new(0.5, 0.0);
        let nz = (&z + yi) * Complex64::new(0.5, 0.0);
        let delta = max_abs_complex(&(&ny - &y));
        y = ny;
        z = nz;
        if delta < 1e-15 * max_abs_complex(&y).max(1.0) {
            break;
        }
    }
    Ok(y)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeadingLogReport {
    pub hbar: f64,
    /// `‖log M(ħ) − 2πiħ Δ_rs‖_max`
    pub residual: f64,
    pub residual_half: f64,
    /// `residual / residual_half`; about 4 for a quadratic remainder
    pub ratio: f64,
    pub orientation: String,
}

impl LeadingLogReport {
    pub fn to_json_value(&self) -> Value {
        json!({
            "hbar": self.hbar,
            "residual": self.residual,
            "residual_half_hbar": self.residual_half,
            "ratio": self.ratio,
            "orientation": self.orientation,
        })
    }
}

/// `‖log M − 2πiħ Δ_rs‖` for the `A_rs` loop at `ħ` and `ħ/2`.
pub fn leading_log_check(rep: &MatrixRep, r: usize, s: usize, hbar: f64, tol: f64) -> Result<LeadingLogReport> {
    let lp = pure_braid_loop(rep.n(), r, s)?;
    let delta = to_complex(rep.delta(r, s));
    let residual_at = |h: f64| -> Result<f64> {
        let m = kz_monodromy(&lp, rep, h, tol)?;
        let l = matrix_log(&m)?;
        Ok(max_abs_complex(&(l - &delta * Complex64::new(0.0, 2.0 * PI * h))))
    };
    let residual = residual_at(hbar)?;
    let residual_half = residual_at(hbar / 2.0)?;
    Ok(LeadingLogReport {
        hbar,
        residual,
        residual_half,
        ratio: if residual_half > 0.0 {
            residual / residual_half
        } else {
            f64::NAN
        },
        orientation: "counterclockwise: log A_rs = +2 pi i hbar D_rs + O(hbar^2)".into(),
    })
}

/// `n` vectors in `R^3` with their initial lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereConfig {
    pub points: Vec<[f64; 3]>,
    pub radii: Vec<f64>,
}

impl SphereConfig {
    pub fn new(points: Vec<[f64; 3]>) -> SphereConfig {
        let radii = points.iter().map(|p| norm3(p)).collect();
        SphereConfig { points, radii }
    }

    /// `n` independent uniform unit vectors.
    pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SphereConfig {
        let points = (0..n)
            .map(|_| loop {
                let p = [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ];
                let r = norm3(&p);
                if r > 1e-3 && r <= 1.0 {
                    break [p[0] / r, p[1] / r, p[2] / r];
                }
            })
            .collect();
        SphereConfig::new(points)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    fn flat(&self) -> Vec<f64> {
        self.points.iter().flat_map(|p| p.iter().copied()).collect()
    }

    fn from_flat(x: &[f64], radii: &[f64]) -> SphereConfig {
        SphereConfig {
            points: x.chunks(3).map(|c| [c[0], c[1], c[2]]).collect(),
            radii: radii.to_vec(),
        }
    }

    pub fn max_distance(&self, other: &SphereConfig) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| norm3(&[a[0] - b[0], a[1] - b[1], a[2] - b[2]]))
            .fold(0.0, f64::max)
    }

    pub fn to_json_value(&self) -> Value {
        json!({"points": self.points})
    }

    pub fn from_json_value(v: &Value) -> Result<SphereConfig> {
        let pts = v
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| AlgebraError::parse("points", "missing or not an array"))?;
        let mut points = Vec::new();
        for (k, p) in pts.iter().enumerate() {
            let arr = p
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| AlgebraError::parse(format!("points[{k}]"), "expected [x, y, z]"))?;
            let mut xyz = [0.0; 3];
            for (c, x) in arr.iter().enumerate() {
                xyz[c] = x
                    .as_f64()
                    .ok_or_else(|| AlgebraError::parse(format!("points[{k}][{c}]"), "expected a number"))?;
            }
            points.push(xyz);
        }
        if points.len() < 2 {
            return Err(AlgebraError::parse("points", "need at least two points"));
        }
        Ok(SphereConfig::new(points))
    }
}

fn norm3(p: &[f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

/// `Σ c_ij Δ_ij` on `so(3)^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowHamiltonian {
    pub terms: Vec<((usize, usize), f64)>,
}

impl FlowHamiltonian {
    pub fn delta(i: usize, j: usize) -> FlowHamiltonian {
        FlowHamiltonian {
            terms: vec![((i.min(j), i.max(j)), 1.0)],
        }
    }

    pub fn zero() -> FlowHamiltonian {
        FlowHamiltonian { terms: Vec::new() }
    }

    pub fn eval(&self, c: &SphereConfig) -> f64 {
        self.terms
            .iter()
            .map(|((i, j), k)| {
                let (a, b) = (c.points[i - 1], c.points[j - 1]);
                k * (a[0] * b[0] + a[1] * b[1] + a[2] * b[2])
            })
            .sum()
    }

    /// Parses `"D12"`, `"D12+D34"`, `"2*D12-1/2*D13"`.
    pub fn parse(text: &str) -> Result<FlowHamiltonian> {
        let bad = || {
            AlgebraError::parse(
                "hamiltonian",
                format!("cannot parse {text:?}; expected terms like 2*D12-D34"),
            )
        };
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned == "0" {
            return Ok(FlowHamiltonian::zero());
        }
        let mut terms = Vec::new();
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1.0, &rest[1..]),
                b'-' => (-1.0, &rest[1..]),
                _ => (1.0, rest),
            };
            let end = body[1..].find(['+', '-']).map(|e| e + 1).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let (coef, name) = match term.split_once('*') {
                Some((c, n)) => (to_f64(&parse_q(c).map_err(|_| bad())?), n),
                None => (1.0, term),
            };
            let digits = name.strip_prefix('D').ok_or_else(bad)?;
            let (i, j) = if let Some((a, b)) = digits.split_once('_') {
                (
                    a.parse::<usize>().map_err(|_| bad())?,
                    b.parse::<usize>().map_err(|_| bad())?,
                )
            } else if digits.len() == 2 {
                (
                    digits[..1].parse().map_err(|_| bad())?,
                    digits[1..].parse().map_err(|_| bad())?,
                )
            } else {
                return Err(bad());
            };
            if i == j || i == 0 || j == 0 {
                return Err(bad());
            }
            terms.push(((i.min(j), i.max(j)), sign * coef));
        }
        Ok(FlowHamiltonian { terms })
    }

    /// The polynomial Hamiltonian (coefficients rounded to rationals).
    pub fn to_poly(&self, n: usize) -> Result<PolyFunction> {
        let s = Structure::So3 { n };
        let mut h = PolyFunction::zero(s);
        for ((i, j), k) in &self.terms {
            let c = Q::from_float(*k).ok_or_else(|| AlgebraError::InvalidArgument("non-finite coefficient".into()))?;
            h = h.add(&hamiltonian(s, *i, *j)?.scale(&c))?;
        }
        Ok(h)
    }
}

/// Sparse `f64` form of a polynomial vector field.
struct CompiledField {
    components: Vec<Vec<(f64, Vec<(usize, i32)>)>>,
}

impl CompiledField {
    fn new(field: &[PolyFunction]) -> CompiledField {
        let components = field
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(e, c)| {
                        let vars = e
                            .iter()
                            .enumerate()
                            .filter(|(_, k)| **k > 0)
                            .map(|(v, k)| (v, *k as i32))
                            .collect();
                        (to_f64(c), vars)
                    })
                    .collect()
            })
            .collect();
        CompiledField { components }
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        for (o, comp) in out.iter_mut().zip(&self.components) {
            *o = comp
                .iter()
                .map(|(c, vars)| c * vars.iter().map(|(v, k)| x[*v].powi(*k)).product::<f64>())
                .sum();
        }
    }
}

/// Hamiltonian flow of `H` from the poisson module's vector field.
pub struct Flow {
    field: CompiledField,
    n: usize,
}

impl Flow {
    pub fn new(h: &FlowHamiltonian, n: usize) -> Result<Flow> {
        if let Some(((_, j), _)) = h.terms.iter().find(|((_, j), _)| *j > n) {
            return Err(AlgebraError::InvalidArgument(format!(
                "Hamiltonian uses point {j} but n={n}"
            )));
        }
        let field = hamiltonian_vector_field(&h.to_poly(n)?)?;
        Ok(Flow {
            field: CompiledField::new(&field),
            n,
        })
    }

    fn rk4_step(&self, x: &mut [f64], h: f64, scratch: &mut [Vec<f64>; 5]) {
        let [k1, k2, k3, k4, tmp] = scratch;
        self.field.eval(x, k1);
        for i in 0..x.len() {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        self.field.eval(tmp, k2);
        for i in 0..x.len() {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        self.field.eval(tmp, k3);
        for i in 0..x.len() {
            tmp[i] = x[i] + h * k3[i];
        }
        self.field.eval(tmp, k4);
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }

    /// Classical RK4 over `duration` (either sign) with `⌈|T|/step⌉` equal steps;
    /// `observe` sees every state including the first.
    pub fn integrate(
        &self,
        start: &SphereConfig,
        duration: f64,
        step: f64,
        mut observe: impl FnMut(f64, &SphereConfig),
    ) -> Result<SphereConfig> {
        if step <= 0.0 || !step.is_finite() {
            return Err(AlgebraError::InvalidArgument("flow step must be positive".into()));
        }
        if start.n() != self.n {
            return Err(AlgebraError::InvalidArgument(format!(
                "configuration has {} points, flow expects {}",
                start.n(),
                self.n
            )));
        }
        let steps = (duration.abs() / step)
            .ceil()
            .max(if duration == 0.0 { 0.0 } else { 1.0 }) as usize;
        let h = if steps == 0 { 0.0 } else { duration / steps as f64 };
        let mut x = start.flat();
        let len = x.len();
        let mut scratch = [
            vec![0.0; len],
            vec![0.0; len],
            vec![0.0; len],
            vec![0.0; len],
            vec![0.0; len],
        ];
        observe(0.0, start);
        for k in 0..steps {
            self.rk4_step(&mut x, h, &mut scratch);
            observe((k + 1) as f64 * h, &SphereConfig::from_flat(&x, &start.radii));
        }
        Ok(SphereConfig::from_flat(&x, &start.radii))
    }
}

/// One row of a flow trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub config: SphereConfig,
    /// `max_j ||r_j| − a_j|`
    pub radius_drift: f64,
    /// `|H − H(0)|`
    pub energy_drift: f64,
    /// `max` over the Hamiltonian's pairs of `|(r_i + r_j) − (r_i + r_j)(0)|`
    pub pair_sum_drift: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowResult {
    pub end: SphereConfig,
    pub rows: Vec<TrajectoryRow>,
    pub max_radius_drift: f64,
    pub max_energy_drift: f64,
    pub max_pair_sum_drift: f64,
}

impl FlowResult {
    pub fn to_csv(&self) -> String {
        let n = self.end.n();
        let mut out = String::from("t");
        for j in 1..=n {
            write!(out, ",x{j},y{j},z{j}").unwrap();
        }
        out.push_str(",radius_drift,energy_drift,pair_sum_drift\n");
        for r in &self.rows {
            write!(out, "{:.12e}", r.t).unwrap();
            for p in &r.config.points {
                write!(out, ",{:.15e},{:.15e},{:.15e}", p[0], p[1], p[2]).unwrap();
            }
            writeln!(
                out,
                ",{:.6e},{:.6e},{:.6e}",
                r.radius_drift, r.energy_drift, r.pair_sum_drift
            )
            .unwrap();
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "end": self.end.to_json_value(),
            "max_radius_drift": self.max_radius_drift,
            "max_energy_drift": self.max_energy_drift,
            "max_pair_sum_drift": self.max_pair_sum_drift,
            "rows": self.rows.len(),
        })
    }
}

/// RK4 flow of `H` for time `T`, recording conserved-quantity drifts every
/// `record_every` steps (and at the end).
pub fn klyachko_flow(
    config: &SphereConfig,
    h: &FlowHamiltonian,
    duration: f64,
    step: f64,
    record_every: usize,
) -> Result<FlowResult> {
    let flow = Flow::new(h, config.n())?;
    let h0 = h.eval(config);
    let pair_sum = |c: &SphereConfig, (i, j): (usize, usize)| {
        let (a, b) = (c.points[i - 1], c.points[j - 1]);
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    };
    let sums0: Vec<[f64; 3]> = h.terms.iter().map(|(p, _)| pair_sum(config, *p)).collect();
    let mut rows = Vec::new();
    let (mut mr, mut me, mut mp) = (0.0f64, 0.0f64, 0.0f64);
    let mut count = 0usize;
    let total = (duration.abs() / step).ceil() as usize;
    let end = flow.integrate(config, duration, step, |t, c| {
        let rd = c
            .points
            .iter()
            .zip(&c.radii)
            .map(|(p, a)| (norm3(p) - a).abs())
            .fold(0.0, f64::max);
        let ed = (h.eval(c) - h0).abs();
        let pd = h
            .terms
            .iter()
            .zip(&sums0)
            .map(|((p, _), s0)| {
                let s = pair_sum(c, *p);
                norm3(&[s[0] - s0[0], s[1] - s0[1], s[2] - s0[2]])
            })
            .fold(0.0, f64::max);
        mr = mr.max(rd);
        me = me.max(ed);
        mp = mp.max(pd);
        if record_every > 0 && (count % record_every == 0 || count == total) {
            rows.push(TrajectoryRow {
                t,
                config: c.clone(),
                radius_drift: rd,
                energy_drift: ed,
                pair_sum_drift: pd,
            });
        }
        count += 1;
    })?;
    Ok(FlowResult {
        end,
        rows,
        max_radius_drift: mr,
        max_energy_drift: me,
        max_pair_sum_drift: mp,
    })
}

/// Exact solution of the `Δ_12` flow for two points: both rotate rigidly
/// about `J = r_1 + r_2` with angular speed `|J|`.
pub fn delta12_exact(config: &SphereConfig, t: f64) -> SphereConfig {
    let (a, b) = (config.points[0], config.points[1]);
    let j = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
    let w = norm3(&j);
    let rot = |v: [f64; 3]| -> [f64; 3] {
        if w == 0.0 {
            return v;
        }
        let k = [j[0] / w, j[1] / w, j[2] / w];
        let (s, c) = (w * t).sin_cos();
        let kv = [
            k[1] * v[2] - k[2] * v[1],
            k[2] * v[0] - k[0] * v[2],
            k[0] * v[1] - k[1] * v[0],
        ];
        let kd = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
        [0, 1, 2].map(|i| v[i] * c + kv[i] * s + k[i] * kd * (1.0 - c))
    };
    let mut points = config.points.clone();
    points[0] = rot(a);
    points[1] = rot(b);
    SphereConfig {
        points,
        radii: config.radii.clone(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowComposeReport {
    pub max_displacement: f64,
    pub tol: f64,
    pub samples: usize,
}

impl FlowComposeReport {
    pub fn passed(&self) -> bool {
        self.max_displacement < self.tol
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "passed": self.passed(),
            "max_displacement": self.max_displacement,
            "tol": self.tol,
            "samples": self.samples,
        })
    }
}

/// Composes the flows of `word` (applied left to right) on every sample and
/// reports the largest displacement from the start.
pub fn flow_compose_check(
    word: &[(FlowHamiltonian, f64)],
    configs: &[SphereConfig],
    step: f64,
    tol: f64,
) -> Result<FlowComposeReport> {
    let n = configs.first().map(SphereConfig::n).unwrap_or(0);
    let flows = word
        .iter()
        .map(|(h, t)| Ok((Flow::new(h, n)?, *t)))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for c in configs {
        let mut x = c.clone();
        for (f, t) in &flows {
            x = f.integrate(&x, *t, step, |_, _| {})?;
        }
        worst = worst.max(x.max_distance(c));
    }
    Ok(FlowComposeReport {
        max_displacement: worst,
        tol,
        samples: configs.len(),
    })
}

/// Letter of the Kohno alphabet for a flow Hamiltonian term.
pub fn flow_letter(i: usize, j: usize) -> Letter {
    Letter::pair(i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spin_half(n: usize) -> MatrixRep {
        MatrixRep::sl2_spins(&vec!["1/2"; n]).unwrap()
    }

    #[test]
    fn loop_geometry() {
        let l = pure_braid_loop(2, 1, 2).unwrap();
        assert!((l.winding_numbers()[&(1, 2)] - 1.0).abs() < 1e-9);
        let l = pure_braid_loop(3, 1, 3).unwrap();
        let w = l.winding_numbers();
        assert!((w[&(1, 3)] - 1.0).abs() < 1e-9);
        assert!(w[&(2, 3)].abs() < 1e-9);
        assert!(w[&(1, 2)].abs() < 1e-9);
        for n in 2..=5 {
            for r in 1..=n {
                for s in r + 1..=n {
                    assert!(pure_braid_loop(n, r, s).unwrap().min_separation() > 0.1);
                }
            }
        }
        let back = ConfigLoop::from_json(&l.to_json()).unwrap();
        assert_eq!(back.pieces(), l.pieces());
        assert!(pure_braid_loop(3, 2, 2).is_err());
    }

    #[test]
    fn abelian_case_is_exact() {
        let rep = spin_half(2);
        let e = kz_monodromy(&unit_circle_loop(), &rep, 0.1, 1e-10).unwrap();
        let expect = (to_complex(rep.delta(1, 2)) * Complex64::new(0.0, 2.0 * PI * 0.1)).exp();
        assert!(max_abs_complex(&(e - expect)) < 1e-10);
        let trivial = MatrixRep::trivial(3, 2).unwrap();
        let e = kz_monodromy(&pure_braid_loop(3, 1, 3).unwrap(), &trivial, 0.1, 1e-10).unwrap();
        assert_eq!(e, CMatrix::identity(2, 2));
    }

    #[test]
    fn loop_and_reverse_cancel() {
        let rep = spin_half(3);
        let l = pure_braid_loop(3, 1, 3).unwrap();
        let a = kz_monodromy(&l, &rep, 0.1, 1e-10).unwrap();
        let b = kz_monodromy(&l.reversed(), &rep, 0.1, 1e-10).unwrap();
        assert!(max_abs_complex(&(a * b - CMatrix::identity(8, 8))) < 1e-9);
    }

    #[test]
    fn reparametrization_invariance() {
        let rep = spin_half(2);
        let l = pure_braid_loop(2, 1, 2).unwrap();
        let mut pieces = l.pieces().to_vec();
        let arc = pieces
            .iter()
            .position(|p| matches!(p.moves[0].curve, Curve::Arc { .. }))
            .unwrap();
        let Curve::Arc {
            center,
            radius,
            start_turn,
            ..
        } = pieces[arc].moves[0].curve.clone()
        else {
            unreachable!()
        };
        let half = |start: Q, sweep: Q| Piece {
            moves: vec![Move {
                point: 2,
                curve: Curve::Arc {
                    center: center.clone(),
                    radius: radius.clone(),
                    start_turn: start,
                    sweep_turns: sweep,
                },
            }],
        };
        pieces.splice(
            arc..=arc,
            [half(start_turn.clone(), q(1, 3)), half(start_turn + q(1, 3), q(2, 3))],
        );
        let split = ConfigLoop::new(2, l.base.clone(), pieces).unwrap();
        let a = kz_monodromy(&l, &rep, 0.1, 1e-10).unwrap();
        let b = kz_monodromy(&split, &rep, 0.1, 1e-10).unwrap();
        assert!(max_abs_complex(&(a - b)) < 1e-9);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let c = SphereConfig::new(vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
        let period = 2.0 * PI / 2f64.sqrt();
        let exact = delta12_exact(&c, period);
        let err = |steps: f64| {
            klyachko_flow(&c, &FlowHamiltonian::delta(1, 2), period, period / steps, 0)
                .unwrap()
                .end
                .max_distance(&exact)
        };
        let ratio = err(64.0) / err(128.0);
        assert!((12.0..=20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn braid_relations_n3() {
        let rep = spin_half(3);
        let m = all_monodromies(&rep, 0.1, 1e-10).unwrap();
        let report = check_pure_braid_relations(&m, 3, 1e-6).unwrap();
        for c in &report.checks {
            assert!(c.holds, "{} deviates by {:e}", c.relation, c.deviation);
        }
    }

    #[test]
    fn matrix_log_inverts_exp() {
        let rep = spin_half(2);
        let x = to_complex(rep.delta(1, 2)) * Complex64::new(0.1, 0.7);
        let l = matrix_log(&x.exp()).unwrap();
        assert!(max_abs_complex(&(l - x)) < 1e-12);
    }

    #[test]
    fn leading_log_examples() {
        let rep = spin_half(2);
        let r = leading_log_check(&rep, 1, 2, 0.1, 1e-12).unwrap();
        assert!(r.residual < 1e-10, "{r:?}");
        let trivial = MatrixRep::trivial(2, 3).unwrap();
        assert_eq!(leading_log_check(&trivial, 1, 2, 0.1, 1e-10).unwrap().residual, 0.0);
    }

    #[test]
    fn hamiltonian_parse() {
        let h = FlowHamiltonian::parse("2*D12 - 1/2*D34+D1_3").unwrap();
        assert_eq!(h.terms, vec![((1, 2), 2.0), ((3, 4), -0.5), ((1, 3), 1.0)]);
        assert!(FlowHamiltonian::parse("D11").is_err());
        assert!(FlowHamiltonian::parse("X12").is_err());
    }

    #[test]
    fn klyachko_worked_example() {
        let c = SphereConfig::new(vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
        let period = 2.0 * PI / 2f64.sqrt();
        let r = klyachko_flow(&c, &FlowHamiltonian::delta(1, 2), period, 1e-3, 0).unwrap();
        assert!(r.end.max_distance(&c) < 1e-6);
        let r = klyachko_flow(&c, &FlowHamiltonian::delta(1, 2), 2.0 * PI, 1e-3, 100).unwrap();
        assert!(r.max_radius_drift < 1e-8 && r.max_energy_drift < 1e-8 && r.max_pair_sum_drift < 1e-8);
        assert!(r.end.max_distance(&delta12_exact(&c, 2.0 * PI)) < 1e-8);
        assert!(r.to_csv().starts_with("t,x1,y1,z1,x2,y2,z2,radius_drift"));
        let z = klyachko_flow(&c, &FlowHamiltonian::zero(), 1.0, 1e-2, 0).unwrap();
        assert_eq!(z.end, c);
    }

    #[test]
    fn flow_compose_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let configs: Vec<SphereConfig> = (0..10).map(|_| SphereConfig::random_unit(&mut rng, 4)).collect();
        let d = FlowHamiltonian::delta;
        let inv = flow_compose_check(&[(d(1, 2), 1.0), (d(1, 2), -1.0)], &configs, 1e-3, 1e-7).unwrap();
        assert!(inv.passed(), "{inv:?}");
        let comm = [(d(1, 2), 1.0), (d(3, 4), 1.0), (d(1, 2), -1.0), (d(3, 4), -1.0)];
        assert!(flow_compose_check(&comm, &configs, 1e-3, 1e-7).unwrap().passed());
        let control = [(d(1, 2), 1.0), (d(1, 3), 1.0), (d(1, 2), -1.0), (d(1, 3), -1.0)];
        assert!(
            flow_compose_check(&control, &configs, 1e-3, 1e-7)
                .unwrap()
                .max_displacement
                > 1e-3
        );
    }
}
