//! Replayable run reports. A report is a line-oriented text document:
//! header (tool, command, seeds), content digests of every file read or
//! written, pass traces, formula checks with measured values, colorings,
//! flow certificates, and gap measurements. Wall-clock lines are emitted
//! only on request so that reports are byte-reproducible by default.

use std::fmt::Write as _;

use minrep_core::num::format_q;
use minrep_core::transforms::PassTrace;

pub const TOOL_VERSION: &str = concat!("minrep ", env!("CARGO_PKG_VERSION"));

pub struct Report {
    lines: Vec<String>,
    timing_lines: Vec<String>,
    pub with_timings: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report { lines: Vec::new(), timing_lines: Vec::new(), with_timings: false };
        r.lines.push("report v1".into());
        r.lines.push(format!("tool {TOOL_VERSION}"));
        r.lines.push(format!("command {command}"));
        r
    }

    pub fn seed(&mut self, seed: u64) {
        self.lines.push(format!("seed {seed}"));
    }

    pub fn digest(&mut self, name: &str, content: &str) {
        self.lines
            .push(format!("digest {name} {}", minrep_core::io::digest_str(content)));
    }

    /// One check line carrying both the formula and the measured value.
    pub fn check(&mut self, name: &str, pass: bool, measured: &str, formula: &str) {
        self.lines.push(format!(
            "check {name} {} measured {measured} formula {formula}",
            if pass { "pass" } else { "fail" }
        ));
    }

    pub fn trace(&mut self, t: &PassTrace) {
        let mut line = format!(
            "trace {} arcsOut {} leftIn {}..{} rightIn {}..{} leftOut {}..{} rightOut {}..{}",
            t.pass.name(),
            t.provenance.len(),
            t.input_profile.min_left,
            t.input_profile.max_left,
            t.input_profile.min_right,
            t.input_profile.max_right,
            t.output_profile.min_left,
            t.output_profile.max_left,
            t.output_profile.min_right,
            t.output_profile.max_right,
        );
        if let Some(m) = t.arc_multiplier {
            let _ = write!(line, " multiplier {m}");
        }
        if let Some(d) = t.params.d_requested {
            let _ = write!(line, " dRequested {d}");
        }
        if let Some(d) = t.params.d_effective {
            let _ = write!(line, " dEffective {d}");
        }
        if let Some(rho) = t.params.rho {
            let _ = write!(line, " rho {rho}");
        }
        if let Some(th) = t.params.threshold {
            let _ = write!(line, " threshold {th}");
        }
        if let Some(a) = t.params.attempt {
            let _ = write!(line, " attempt {a}");
        }
        if let Some(f) = &t.removed_vertex_fraction {
            let _ = write!(line, " removedFraction {}", format_q(*f));
        }
        if let Some(seed) = t.seed {
            let _ = write!(line, " seed {seed}");
        }
        if let Some(skip) = &t.skipped {
            let _ = write!(line, " skipped \"{skip}\"");
        }
        self.lines.push(line);
    }

    pub fn color_lines(&mut self, coloring: &minrep_core::StrongColoring) {
        for (arc, &color) in coloring.color_of.iter().enumerate() {
            self.lines.push(format!("color {arc} {color}"));
        }
    }

    pub fn flow_certificate(&mut self, cert: &minrep_core::FlowCertificate) {
        self.lines.push(format!(
            "flowcert {} {} count {} cutVertices {} cutDirect {}",
            cert.s,
            cert.t,
            cert.path_count,
            cert.cut_vertices.len(),
            cert.cut_direct_mult
        ));
        for path in &cert.witness_paths {
            let mut line = format!("flowpath {} {} :", cert.s, cert.t);
            for v in path {
                let _ = write!(line, " {v}");
            }
            self.lines.push(line);
        }
    }

    pub fn gap(&mut self, g: &minrep_core::GapReport) {
        self.lines.push(format!(
            "gap gadget {} yesOpt {} noOpt {} ratio {} yesMax {} noMax {} C {} delta {} k {} demands {}",
            g.gadget.tag(),
            format_q(g.yes_opt),
            format_q(g.no_opt),
            format_q(g.ratio),
            format_q(g.yes_max_fraction),
            format_q(g.no_max_fraction),
            format_q(g.cost_unit),
            g.delta,
            g.k,
            g.demand_count
        ));
        for check in &g.checks {
            self.check(
                &format!("gap.{}", check.name.replace(' ', "-")),
                check.bound_holds.unwrap_or(true),
                &check.value,
                "see name",
            );
        }
    }

    pub fn wall(&mut self, stage: &str, ms: u128) {
        self.timing_lines.push(format!("wall {stage} {ms}ms"));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        if self.with_timings {
            for line in &self.timing_lines {
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }
}
