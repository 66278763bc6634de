//! Analysis reports: the machine- and human-readable output of the CLI.
//!
//! The JSON form is a flat object with snake_case keys; floats are
//! printed with 17 significant digits so that re-parsing reproduces the
//! exact values. The text form is for humans and is not a stability
//! surface.

use std::fmt::Write as _;

use crate::idempotent::{CountProfile, ProjectorAnalysis, Tolerances};
use crate::involutory::{pairing_check_with, tn_relation_check, InvolutorySVD, Sign};
use crate::kernels::svd_oracle;
use crate::matrix::Matrix;

pub const ORACLE_GAP_RTOL: f64 = 1e-9;
pub const TN_RESIDUAL_SCALE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalysisMode {
    Idempotent,
    Involutory,
}

impl AnalysisMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AnalysisMode::Idempotent => "idempotent",
            AnalysisMode::Involutory => "involutory",
        }
    }
}

/// Aggregated analysis output. The residual block is always present;
/// individual `*_pass` flags record failures instead of omitting fields.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub mode: AnalysisMode,
    pub n: usize,
    pub idempotency_residual: f64,
    pub involution_residual: f64,
    pub counts: CountProfile,
    pub sigma: Vec<f64>,
    pub psi_rad: Vec<f64>,
    pub psi_deg: Vec<f64>,
    pub tau: Vec<f64>,
    /// Involutory mode only; empty otherwise.
    pub phi_rad: Vec<f64>,
    pub pairs: Vec<(usize, usize)>,
    pub sign: Option<Sign>,

    pub reconstruction_residual: f64,
    pub reconstruction_tol: f64,
    pub reconstruction_pass: bool,
    pub schur_residual: f64,
    pub schur_tol: f64,
    pub schur_pass: bool,
    pub coupling_residual: Option<f64>,
    pub coupling_degenerate: bool,
    pub oracle_gap: f64,
    pub oracle_tol: f64,
    pub oracle_pass: bool,
    pub tn_residual: Option<f64>,
    pub tn_tol: Option<f64>,
    pub tn_pass: bool,
    pub pairing_pass: bool,

    pub tol_idem: f64,
    pub tol_invol: f64,
    pub tol_count: f64,
    pub tol_zero: f64,
    pub tol_rec: f64,
    pub angle_sep: f64,

    pub all_passed: bool,
    pub elapsed_ms: f64,
}

fn oracle_gap(m: &Matrix, sigma: &[f64]) -> f64 {
    let oracle = svd_oracle(m);
    sigma
        .iter()
        .zip(&oracle.sigma)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

impl AnalysisReport {
    /// Report for the projector branch.
    pub fn from_idempotent(
        m: &Matrix,
        analysis: &ProjectorAnalysis,
        involution_residual: f64,
        tol: &Tolerances,
        elapsed_ms: f64,
    ) -> Self {
        let n = m.rows();
        let counts = analysis.ssvd.counts;
        let sigma = analysis.ssvd.sigma.clone();
        let sigma1 = sigma.first().copied().unwrap_or(0.0);
        let rec_tol = tol.rec_tol(m.frobenius_norm());
        let gap = oracle_gap(m, &sigma);
        let oracle_tol = ORACLE_GAP_RTOL * sigma1.max(1.0);
        let reconstruction_pass = analysis.reconstruction_residual <= rec_tol;
        let schur_pass = analysis.schur_residual <= rec_tol;
        let oracle_pass = gap <= oracle_tol;
        let psi_rad = analysis.ssvd.angles.psi().to_vec();
        AnalysisReport {
            mode: AnalysisMode::Idempotent,
            n,
            idempotency_residual: analysis.idempotency_residual,
            involution_residual,
            counts,
            psi_deg: psi_rad.iter().map(|p| p.to_degrees()).collect(),
            psi_rad,
            tau: analysis.canonical.tau.clone(),
            phi_rad: vec![],
            pairs: vec![],
            sign: None,
            sigma,
            reconstruction_residual: analysis.reconstruction_residual,
            reconstruction_tol: rec_tol,
            reconstruction_pass,
            schur_residual: analysis.schur_residual,
            schur_tol: rec_tol,
            schur_pass,
            coupling_residual: analysis.coupling.pattern_residual,
            coupling_degenerate: analysis.coupling.degenerate,
            oracle_gap: gap,
            oracle_tol,
            oracle_pass,
            tn_residual: None,
            tn_tol: None,
            tn_pass: true,
            pairing_pass: true,
            tol_idem: tol.idem,
            tol_invol: tol.invol,
            tol_count: tol.count_tol(n),
            tol_zero: tol.zero_tol(n, sigma1),
            tol_rec: rec_tol,
            angle_sep: tol.angle_sep,
            all_passed: reconstruction_pass && schur_pass && oracle_pass,
            elapsed_ms,
        }
    }

    /// Report for the involutory branch. `analysis` is the pipeline output
    /// for the underlying idempotent `M = (sign B + I)/2`, whose Frobenius
    /// norm scales the Schur residual gate.
    #[allow(clippy::too_many_arguments)]
    pub fn from_involutory(
        b: &Matrix,
        sign: Sign,
        isvd: &InvolutorySVD,
        analysis: &ProjectorAnalysis,
        m_norm: f64,
        idempotency_residual: f64,
        involution_residual: f64,
        tol: &Tolerances,
        elapsed_ms: f64,
    ) -> Self {
        let n = b.rows();
        let counts = isvd.counts;
        let sigma = isvd.sigma.clone();
        let sigma1 = sigma.first().copied().unwrap_or(0.0);
        let rec_tol = tol.rec_tol(b.frobenius_norm());
        let rebuilt = &(&isvd.u * &Matrix::diag(&sigma)) * &isvd.v.adjoint();
        let reconstruction_residual = (&rebuilt - b).frobenius_norm();
        let reconstruction_pass = reconstruction_residual <= rec_tol;
        let gap = oracle_gap(b, &sigma);
        let oracle_tol = ORACLE_GAP_RTOL * sigma1.max(1.0);
        let oracle_pass = gap <= oracle_tol;
        let tn_res = tn_relation_check(isvd);
        let tn_tol = TN_RESIDUAL_SCALE * (n as f64).sqrt();
        let tn_pass = tn_res <= tn_tol;
        let pairing = pairing_check_with(isvd, tol);
        let schur_tol = tol.rec_tol(m_norm);
        let schur_pass = analysis.schur_residual <= schur_tol;
        let psi_rad = analysis.ssvd.angles.psi().to_vec();
        AnalysisReport {
            mode: AnalysisMode::Involutory,
            n,
            idempotency_residual,
            involution_residual,
            counts,
            psi_deg: psi_rad.iter().map(|p| p.to_degrees()).collect(),
            psi_rad,
            tau: analysis.canonical.tau.clone(),
            phi_rad: isvd.phi.clone(),
            pairs: isvd.pairing.clone(),
            sign: Some(sign),
            sigma,
            reconstruction_residual,
            reconstruction_tol: rec_tol,
            reconstruction_pass,
            schur_residual: analysis.schur_residual,
            schur_tol,
            schur_pass,
            coupling_residual: analysis.coupling.pattern_residual,
            coupling_degenerate: analysis.coupling.degenerate,
            oracle_gap: gap,
            oracle_tol,
            oracle_pass,
            tn_residual: Some(tn_res),
            tn_tol: Some(tn_tol),
            tn_pass,
            pairing_pass: pairing.pass,
            tol_idem: tol.idem,
            tol_invol: tol.invol,
            tol_count: tol.count_tol(n),
            tol_zero: tol.zero_tol(n, sigma1),
            tol_rec: rec_tol,
            angle_sep: tol.angle_sep,
            all_passed: reconstruction_pass && oracle_pass && tn_pass && pairing.pass && schur_pass,
            elapsed_ms,
        }
    }

    /// Human-readable rendering, key: value blocks.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", self.mode.as_str());
        let _ = writeln!(out, "n: {}", self.n);
        let _ = writeln!(out, "idempotency residual: {:.3e}", self.idempotency_residual);
        let _ = writeln!(out, "involution residual: {:.3e}", self.involution_residual);
        if let Some(sign) = self.sign {
            let _ = writeln!(out, "sign: {}", sign);
        }
        let _ = writeln!(
            out,
            "census: r={} s={} t={} nu={}",
            self.counts.r, self.counts.s, self.counts.t, self.counts.nu
        );
        let _ = writeln!(out, "sigma: {}", join_floats(&self.sigma, ", "));
        let _ = writeln!(out, "psi (rad): {}", join_floats(&self.psi_rad, ", "));
        let _ = writeln!(
            out,
            "psi (deg): {}",
            self.psi_deg.iter().map(|p| format!("{:.8}", p)).collect::<Vec<_>>().join(", ")
        );
        let _ = writeln!(out, "tau: {}", join_floats(&self.tau, ", "));
        if self.mode == AnalysisMode::Involutory {
            let _ = writeln!(out, "phi (rad): {}", join_floats(&self.phi_rad, ", "));
            let pair_text: Vec<String> = self
                .pairs
                .iter()
                .map(|&(j, k)| format!("({:.8}, {:.8})", self.sigma[j], self.sigma[k]))
                .collect();
            let _ = writeln!(out, "pairs: {}", pair_text.join(" "));
        }
        let _ = writeln!(
            out,
            "reconstruction residual: {:.3e} (tol {:.3e}) {}",
            self.reconstruction_residual,
            self.reconstruction_tol,
            pass_str(self.reconstruction_pass)
        );
        let _ = writeln!(
            out,
            "schur residual: {:.3e} (tol {:.3e}) {}",
            self.schur_residual,
            self.schur_tol,
            pass_str(self.schur_pass)
        );
        match self.coupling_residual {
            Some(res) => {
                let _ = writeln!(out, "coupling pattern residual: {:.3e}", res);
            }
            None => {
                let _ = writeln!(
                    out,
                    "coupling pattern: skipped ({})",
                    if self.coupling_degenerate { "degenerate angles" } else { "n/a" }
                );
            }
        }
        let _ = writeln!(
            out,
            "oracle gap: {:.3e} (tol {:.3e}) {}",
            self.oracle_gap,
            self.oracle_tol,
            pass_str(self.oracle_pass)
        );
        if let (Some(res), Some(tol)) = (self.tn_residual, self.tn_tol) {
            let _ = writeln!(out, "tn relation residual: {:.3e} (tol {:.3e}) {}", res, tol, pass_str(self.tn_pass));
            let _ = writeln!(out, "pairing: {}", pass_str(self.pairing_pass));
        }
        let _ = writeln!(
            out,
            "tolerances: idem={:.1e} invol={:.1e} count={:.1e} zero={:.1e} rec={:.3e} angle_sep={:.1e}",
            self.tol_idem, self.tol_invol, self.tol_count, self.tol_zero, self.tol_rec, self.angle_sep
        );
        let _ = writeln!(out, "elapsed_ms: {:.3}", self.elapsed_ms);
        let _ = writeln!(out, "result: {}", if self.all_passed { "ok" } else { "CHECK FAILED" });
        out
    }

    /// Flat JSON object; floats carry 17 significant digits.
    pub fn render_json(&self) -> String {
        let mut w = JsonWriter::new();
        w.string("mode", self.mode.as_str());
        w.int("n", self.n);
        w.float("idempotency_residual", self.idempotency_residual);
        w.float("involution_residual", self.involution_residual);
        if let Some(sign) = self.sign {
            w.int_signed("sign", if sign == Sign::Plus { 1 } else { -1 });
        }
        w.int("r", self.counts.r);
        w.int("s", self.counts.s);
        w.int("t", self.counts.t);
        w.int("nu", self.counts.nu);
        w.float_array("sigma", &self.sigma);
        w.float_array("psi_rad", &self.psi_rad);
        w.float_array("psi_deg", &self.psi_deg);
        w.float_array("tau", &self.tau);
        if self.mode == AnalysisMode::Involutory {
            w.float_array("phi_rad", &self.phi_rad);
            w.pair_array("pairs", &self.pairs);
        }
        w.float("reconstruction_residual", self.reconstruction_residual);
        w.float("reconstruction_tol", self.reconstruction_tol);
        w.bool("reconstruction_pass", self.reconstruction_pass);
        w.float("schur_residual", self.schur_residual);
        w.float("schur_tol", self.schur_tol);
        w.bool("schur_pass", self.schur_pass);
        match self.coupling_residual {
            Some(res) => w.float("coupling_pattern_residual", res),
            None => w.null("coupling_pattern_residual"),
        }
        w.bool("coupling_degenerate", self.coupling_degenerate);
        w.float("oracle_gap", self.oracle_gap);
        w.float("oracle_tol", self.oracle_tol);
        w.bool("oracle_pass", self.oracle_pass);
        if let (Some(res), Some(tol)) = (self.tn_residual, self.tn_tol) {
            w.float("tn_residual", res);
            w.float("tn_tol", tol);
            w.bool("tn_pass", self.tn_pass);
            w.bool("pairing_pass", self.pairing_pass);
        }
        w.float("tol_idem", self.tol_idem);
        w.float("tol_invol", self.tol_invol);
        w.float("tol_count", self.tol_count);
        w.float("tol_zero", self.tol_zero);
        w.float("tol_rec", self.tol_rec);
        w.float("angle_sep", self.angle_sep);
        w.bool("all_checks_passed", self.all_passed);
        w.float("elapsed_ms", self.elapsed_ms);
        w.finish()
    }
}

fn pass_str(pass: bool) -> &'static str {
    if pass {
        "[pass]"
    } else {
        "[FAIL]"
    }
}

fn join_floats(values: &[f64], sep: &str) -> String {
    values.iter().map(|v| format!("{:.8}", v)).collect::<Vec<_>>().join(sep)
}

/// Minimal JSON writer for the flat report object. Floats use `{:.16e}`,
/// i.e. 17 significant digits, enough to reproduce any f64 exactly.
pub struct JsonWriter {
    body: String,
    first: bool,
}

impl JsonWriter {
    pub fn new() -> Self {
        JsonWriter {
            body: String::from("{"),
            first: true,
        }
    }

    fn key(&mut self, key: &str) {
        if !self.first {
            self.body.push(',');
        }
        self.first = false;
        let _ = write!(self.body, "\"{}\":", key);
    }

    pub fn string(&mut self, key: &str, value: &str) {
        self.key(key);
        let _ = write!(self.body, "\"{}\"", value);
    }

    pub fn int(&mut self, key: &str, value: usize) {
        self.key(key);
        let _ = write!(self.body, "{}", value);
    }

    pub fn int_signed(&mut self, key: &str, value: i64) {
        self.key(key);
        let _ = write!(self.body, "{}", value);
    }

    pub fn bool(&mut self, key: &str, value: bool) {
        self.key(key);
        let _ = write!(self.body, "{}", value);
    }

    pub fn null(&mut self, key: &str) {
        self.key(key);
        self.body.push_str("null");
    }

    pub fn float(&mut self, key: &str, value: f64) {
        debug_assert!(value.is_finite(), "report field {key} is not finite");
        self.key(key);
        let _ = write!(self.body, "{:.16e}", value);
    }

    pub fn float_array(&mut self, key: &str, values: &[f64]) {
        self.key(key);
        self.body.push('[');
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.body.push(',');
            }
            let _ = write!(self.body, "{:.16e}", v);
        }
        self.body.push(']');
    }

    pub fn pair_array(&mut self, key: &str, values: &[(usize, usize)]) {
        self.key(key);
        self.body.push('[');
        for (i, (a, b)) in values.iter().enumerate() {
            if i > 0 {
                self.body.push(',');
            }
            let _ = write!(self.body, "[{},{}]", a, b);
        }
        self.body.push(']');
    }

    pub fn finish(mut self) -> String {
        self.body.push('}');
        self.body
    }
}

impl Default for JsonWriter {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idempotent::analyze_idempotent;

    #[test]
    fn json_floats_roundtrip_exactly() {
        let value = std::f64::consts::SQRT_2;
        let text = format!("{:.16e}", value);
        let back: f64 = text.parse().unwrap();
        assert_eq!(back, value);
    }

    #[test]
    fn report_for_oblique_projector() {
        let m = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let tol = Tolerances::default();
        let analysis = analyze_idempotent(&m, &tol).unwrap();
        let report = AnalysisReport::from_idempotent(&m, &analysis, 1.0, &tol, 0.1);
        assert!(report.all_passed);
        let json = report.render_json();
        assert!(json.starts_with('{') && json.ends_with('}'));
        assert!(json.contains("\"mode\":\"idempotent\""));
        assert!(json.contains("\"t\":1"));
        let text = report.render_text();
        assert!(text.contains("census: r=1 s=1 t=1 nu=1"));
        assert!(text.contains("result: ok"));
    }
}
