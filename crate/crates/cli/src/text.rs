//! Plain-text rendering of command results.

use std::fmt::Write;

use crate::doc::{
    BatchDocument, CarnotResult, CohopfResult, ComponentDoc, DefendoResult, GrowthResult, InputInfo, Report,
    SystoleResult, TorusResult, WeightDim,
};

fn weight(w: &[i64]) -> String {
    match w {
        [x] => x.to_string(),
        _ => format!("({})", w.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")),
    }
}

fn degrees(ws: &[WeightDim]) -> String {
    ws.iter().map(|w| format!("{}:{}", weight(&w.weight), w.dim)).collect::<Vec<_>>().join(" ")
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn header(out: &mut String, info: &InputInfo) {
    let _ = writeln!(out, "algebra      {} algebra of dimension {}, basis {}", kind(info), info.dim, info.basis.join(" "));
}

fn kind(info: &InputInfo) -> String {
    serde_json::to_value(info.kind).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

fn component_lines(out: &mut String, cs: &[ComponentDoc]) {
    for c in cs {
        let basis: Vec<String> = c.basis.basis().iter().map(|v| format!("[{}]", list(v))).collect();
        let _ = writeln!(out, "  weight {:<8} dim {}  {}", weight(&c.weight), c.dim, basis.join(" "));
    }
}

pub fn report(info: &InputInfo, r: &Report) -> String {
    let mut out = String::new();
    header(&mut out, info);
    let _ = writeln!(out, "valid        {}", yes(r.validation.is_ok()));
    let _ = writeln!(out, "lower series {}", list(&r.lower_series));
    match r.class {
        Some(c) => {
            let _ = writeln!(out, "nilpotent    yes, class {c}");
        }
        None => {
            let _ = writeln!(out, "nilpotent    no");
        }
    }
    let _ = writeln!(out, "center dim   {}", r.center_dim);
    if let Some(d) = r.growth_degree {
        let _ = writeln!(out, "growth       degree {d}");
    }
    if let Some(c) = &r.carnot {
        match &c.degrees {
            Some(ds) => {
                let _ = writeln!(out, "carnot       yes, degrees {}", degrees(ds));
            }
            None => {
                let _ = writeln!(out, "carnot       no");
            }
        }
    }
    let _ = writeln!(
        out,
        "torus        rank {} ({}), weights {}",
        r.torus.rank,
        level(&r.torus.certificate),
        degrees(&r.torus.weights)
    );
    let _ = writeln!(
        out,
        "cone         contractable {}, semicontractable {}, flexible split {}",
        yes(r.cone.contractable),
        yes(r.cone.semicontractable),
        yes(r.cone.flexible_split)
    );
    let _ = writeln!(
        out,
        "contraction  g0 dim {}, g+ dim {}",
        r.contractive.uncontracted_dim, r.contractive.contracted_dim
    );
    if let Some(rad) = &r.radicals {
        let _ = writeln!(
            out,
            "radicals     cni dim {}, cni+ dim {}{}",
            rad.cni_dim,
            rad.cni_plus_dim,
            if rad.cni_exact { "" } else { " (cni is an upper bound)" }
        );
    }
    if let Some(c) = &r.classification {
        let _ = writeln!(out, "class        {} (min Hirsch length {})", c.label, c.min_hirsch_length);
    }
    out
}

fn level<T: serde::Serialize>(l: &T) -> String {
    serde_json::to_value(l).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

pub fn carnot(info: &InputInfo, r: &CarnotResult) -> String {
    let mut out = String::new();
    header(&mut out, info);
    let _ = writeln!(out, "lower series {}", list(&r.lower_series));
    if let Some(g) = &r.grading {
        let _ = writeln!(out, "carnot       yes");
        component_lines(&mut out, g);
    } else {
        let _ = writeln!(
            out,
            "carnot       no (certificate combines {} equations into 0 = 1)",
            r.certificate_equations.unwrap_or(0)
        );
    }
    out
}

pub fn torus(info: &InputInfo, r: &TorusResult) -> String {
    let mut out = String::new();
    header(&mut out, info);
    let _ = writeln!(out, "torus        rank {} ({})", r.rank, level(&r.certificate));
    component_lines(&mut out, &r.components);
    let _ = writeln!(
        out,
        "cone         contractable {}, semicontractable {}, flexible split {}",
        yes(r.cone.contractable),
        yes(r.cone.semicontractable),
        yes(r.cone.flexible_split)
    );
    out
}

pub fn cohopf(info: &InputInfo, r: &CohopfResult) -> String {
    let mut out = String::new();
    header(&mut out, info);
    let rep = &r.report;
    let _ = writeln!(out, "class        {}", r.label);
    let _ = writeln!(
        out,
        "flags        contractable {}, semicontractable {}, essentially contractable {}",
        yes(rep.contractable),
        yes(rep.semicontractable),
        yes(rep.essentially_contractable)
    );
    let _ = writeln!(
        out,
        "radicals     cni dim {}, cni+ dim {}, g0 dim {}, min Hirsch length {}",
        rep.cni.dim(),
        rep.cni_plus.dim(),
        rep.uncontracted_dim,
        rep.min_hirsch_length
    );
    let _ = writeln!(out, "torus        rank {} ({})", rep.torus_rank, level(&rep.certificate));
    if let Some(a) = &r.automorphism {
        let _ = writeln!(out, "automorphism {}", yes(a.is_automorphism));
        let _ = writeln!(out, "  stabilizes a lattice {}", yes(a.stabilizes_some_lattice));
        let _ = writeln!(out, "  preserves a lattice  {}", yes(a.preserves_some_lattice));
        for c in &a.absolute_grading.components {
            let _ = writeln!(
                out,
                "  modulus ({})^(1/{})  dim {}",
                c.weight.norm,
                c.weight.degree,
                c.subspace.dim()
            );
        }
        if let Some(l) = &a.intersection_with_standard_lattice {
            let _ = writeln!(out, "  intersection of images of Z^d has rank {}", l.rank());
        }
    }
    out
}

pub fn growth(info: &InputInfo, r: &GrowthResult) -> String {
    let mut out = String::new();
    header(&mut out, info);
    let _ = writeln!(out, "lower series {}", list(&r.lower_series));
    let _ = writeln!(out, "class        {}", r.class);
    let _ = writeln!(out, "growth       degree {}", r.growth_degree);
    let _ = writeln!(out, "homogeneous  dimension {} ({} grading)", r.homogeneous_dimension, r.grading);
    let _ = writeln!(out, "uppersys     exponent {}", r.uppersys_exponent);
    out
}

pub fn defendo(info: &InputInfo, r: &DefendoResult) -> String {
    let mut out = String::new();
    header(&mut out, info);
    let c = &r.certificate;
    let _ = writeln!(out, "grading      {}, degrees {}", r.grading, degrees(&r.degrees));
    let _ = writeln!(out, "lattice      verified {}", yes(r.lattice_verified));
    let _ = writeln!(out, "modulus      k0 = {} (s = {}, k = {}, k' = {})", c.k0, c.s, c.k, c.k_prime);
    let _ = writeln!(out, "homogeneous  dimension {}", c.homogeneous_dimension);
    for check in &c.checks {
        let _ = writeln!(
            out,
            "  m = {:<12} stabilizes {}  index {}  expected {}",
            check.m,
            yes(check.stabilizes),
            check.index,
            check.expected_index
        );
    }
    let _ = writeln!(out, "result       {}", if r.passed { "pass" } else { "fail" });
    out
}

pub fn systole(info: &InputInfo, r: &SystoleResult) -> String {
    let mut out = String::new();
    header(&mut out, info);
    let _ = writeln!(out, "grading      {}, degrees {}", r.grading, degrees(&r.degrees));
    let _ = writeln!(out, "growth       degree {}", r.growth_degree);
    let _ = writeln!(out, "{:>4} {:>16} {:>14} {:>14}", "m", "index", "systole", "normal bound");
    for row in &r.experiment.rows {
        let _ = writeln!(
            out,
            "{:>4} {:>16} {:>14.6} {:>14.6}",
            row.m,
            row.index.to_string(),
            row.systole.to_f64(),
            row.normal_systole_lower_bound.to_f64()
        );
    }
    let _ = writeln!(out, "slope        {:.4}", r.experiment.slope);
    let _ = writeln!(out, "note         {}", r.experiment.note);
    out
}

pub fn batch(b: &BatchDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<24} {:>3} {:>5} {:>6} {:>7} {:>5}  classification", "file", "dim", "class", "carnot", "torus", "exit");
    for e in &b.files {
        match (&e.report, &e.error) {
            (Some(r), _) => {
                let class = r.class.map_or("-".into(), |c| c.to_string());
                let carnot = r.carnot.as_ref().map_or("-", |c| yes(c.carnot));
                let label = r.classification.as_ref().map_or("-", |c| c.label);
                let dim = e.input.as_ref().map_or(0, |i| i.dim);
                let _ = writeln!(
                    out,
                    "{:<24} {:>3} {:>5} {:>6} {:>7} {:>5}  {}",
                    e.file, dim, class, carnot, r.torus.rank, e.exit_code, label
                );
            }
            (None, Some(err)) => {
                let _ = writeln!(out, "{:<24} {:>3} {:>5} {:>6} {:>7} {:>5}  error: {}", e.file, "-", "-", "-", "-", e.exit_code, err.message);
            }
            (None, None) => {}
        }
    }
    out
}
