use std::fmt::Write as _;

use clap::ValueEnum;
use liftlab::counting::LiftCountReport;
use liftlab::factor::factorize;
use liftlab::lifts::{Certificate, ClassificationReport, Witness};
use liftlab::presentation::{FareySymbol, GeneratorSet};
use liftlab::suite::Scoreboard;
use liftlab::{GroupKind, Result};
use serde::{Deserialize, Serialize};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// One row of `count`: both routes side by side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub kind: GroupKind,
    #[serde(rename = "N")]
    pub level: u32,
    pub s: u32,
    pub t: usize,
    pub formula: Option<LiftCountReport>,
    pub engine: Option<LiftCountReport>,
    /// `None` unless both routes ran.
    pub agree: Option<bool>,
}

impl CountRow {
    pub fn new(
        kind: GroupKind,
        level: u32,
        formula: Option<LiftCountReport>,
        engine: Option<LiftCountReport>,
    ) -> Result<Self> {
        let prof = factorize(level.into())?;
        let agree = match (&formula, &engine) {
            (Some(f), Some(e)) => Some(f.count == e.count),
            _ => None,
        };
        Ok(CountRow { kind, level, s: prof.s, t: prof.t(), formula, engine, agree })
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| liftlab::Error::Internal(e.to_string()))
}

fn opt_count(r: &Option<LiftCountReport>) -> String {
    r.as_ref().map_or_else(|| "-".to_string(), |r| r.count.to_string())
}

fn agree_text(a: Option<bool>) -> &'static str {
    match a {
        Some(true) => "yes",
        Some(false) => "NO",
        None => "-",
    }
}

pub fn counts(rows: &[CountRow], format: Format) -> Result<String> {
    let mut out = String::new();
    match format {
        Format::Json => return json(&rows),
        Format::Csv => {
            out.push_str("kind,N,s,t,case,formula,engine,agree\n");
            for r in rows {
                let case = r.formula.as_ref().map_or("", |f| f.case.as_str());
                let agree = r.agree.map_or(String::new(), |a| a.to_string());
                let f = r.formula.as_ref().map_or(String::new(), |f| f.count.to_string());
                let e = r.engine.as_ref().map_or(String::new(), |e| e.count.to_string());
                writeln!(out, "{},{},{},{},\"{case}\",{f},{e},{agree}", r.kind, r.level, r.s, r.t).unwrap();
            }
        }
        Format::Table => {
            writeln!(out, "{:<7} {:>4} {:>2} {:>2}  {:<28} {:>10} {:>10}  agree", "kind", "N", "s", "t", "case", "formula", "engine")
                .unwrap();
            for r in rows {
                let case = r.formula.as_ref().or(r.engine.as_ref()).map_or("", |x| x.case.as_str());
                writeln!(
                    out,
                    "{:<7} {:>4} {:>2} {:>2}  {:<28} {:>10} {:>10}  {}",
                    r.kind.to_string(),
                    r.level,
                    r.s,
                    r.t,
                    case,
                    opt_count(&r.formula),
                    opt_count(&r.engine),
                    agree_text(r.agree)
                )
                .unwrap();
            }
        }
    }
    Ok(out)
}

fn signs(ch: &liftlab::lifts::SignCharacter) -> String {
    if ch.full_preimage {
        return "full preimage".into();
    }
    if ch.free_signs.is_empty() {
        return "()".into();
    }
    ch.free_signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

pub fn classifications(reports: &[ClassificationReport], single: bool, lifts: bool, format: Format) -> Result<String> {
    let mut out = String::new();
    match format {
        Format::Json if single => return json(&reports[0]),
        Format::Json => return json(&reports),
        Format::Csv => {
            out.push_str("kind,N,s,t,index,e2,e3,r,total_lifts,congruence,noncongruence\n");
            for r in reports {
                let prof = factorize(r.level.into())?;
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    r.kind,
                    r.level,
                    prof.s,
                    prof.t(),
                    r.index,
                    r.e2,
                    r.e3,
                    r.r,
                    r.total_lifts,
                    r.congruence,
                    r.noncongruence
                )
                .unwrap();
            }
        }
        Format::Table => {
            writeln!(
                out,
                "{:<7} {:>4} {:>6} {:>3} {:>3} {:>4} {:>12} {:>12} {:>12}  route",
                "kind", "N", "index", "e2", "e3", "r", "total", "congruence", "noncongr."
            )
            .unwrap();
            for r in reports {
                writeln!(
                    out,
                    "{:<7} {:>4} {:>6} {:>3} {:>3} {:>4} {:>12} {:>12} {:>12}  {}",
                    r.kind.to_string(),
                    r.level,
                    r.index,
                    r.e2,
                    r.e3,
                    r.r,
                    r.total_lifts,
                    r.congruence,
                    r.noncongruence,
                    format!("{:?}", r.route).to_lowercase()
                )
                .unwrap();
                if lifts {
                    for d in &r.lifts {
                        writeln!(
                            out,
                            "    {:<16} {:<14} image {} of {} mod {}",
                            signs(&d.character),
                            format!("{:?}", d.classification).to_lowercase(),
                            d.certificate.image_order,
                            d.certificate.full_image_order,
                            d.certificate.modulus
                        )
                        .unwrap();
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn witness(w: &Witness, format: Format) -> Result<String> {
    let mut out = String::new();
    match format {
        Format::Json => return json(w),
        Format::Csv => {
            out.push_str("kind,N,a,b,c,d\n");
            for g in &w.generators {
                writeln!(out, "{},{},{},{},{},{}", w.kind, w.level, g.a, g.b, g.c, g.d).unwrap();
            }
        }
        Format::Table => {
            writeln!(out, "noncongruence lift of {}({}) ({})", w.kind, w.level, w.origin).unwrap();
            writeln!(out, "signs on free generators: {}", signs(&w.character)).unwrap();
            writeln!(
                out,
                "image mod {}: order {} = full image order {}",
                w.certificate.modulus, w.certificate.image_order, w.certificate.full_image_order
            )
            .unwrap();
            writeln!(out, "generators:").unwrap();
            for g in &w.generators {
                writeln!(out, "  {g}").unwrap();
            }
        }
    }
    Ok(out)
}

pub fn nonexistence(kind: GroupKind, level: u32) -> String {
    let mut why = format!("{kind}({level}) has no noncongruence lift: ");
    let closed = match kind {
        GroupKind::Gamma0 => liftlab::counting::all_lifts_congruence_gamma0(level).unwrap_or(false),
        GroupKind::Gamma1 => liftlab::counting::all_lifts_congruence_gamma1(level).unwrap_or(false),
        _ => false,
    };
    match kind {
        GroupKind::Gamma0 if closed && [3, 4, 8].contains(&level) => why.push_str("every lift is congruence for N in {3, 4, 8}"),
        GroupKind::Gamma0 if closed => {
            why.push_str("4 does not divide N and every odd prime factor is 1 mod 4, so every lift is congruence")
        }
        GroupKind::Gamma1 if closed => why.push_str("every lift is congruence for N <= 4"),
        _ => why.push_str("every lift found by exhaustive classification is congruence"),
    }
    why
}

pub fn presentations(sets: &[(FareySymbol, GeneratorSet)], single: bool, format: Format) -> Result<String> {
    let mut out = String::new();
    match format {
        Format::Json if single => return json(&sets[0].1),
        Format::Json => return json(&sets.iter().map(|(_, g)| g).collect::<Vec<_>>()),
        Format::Csv => {
            out.push_str("kind,N,type,a,b,c,d\n");
            for (_, gens) in sets {
                for g in &gens.generators {
                    let m = g.matrix;
                    let ty = serde_json::to_value(g.kind).map_err(|e| liftlab::Error::Internal(e.to_string()))?;
                    let ty = ty.as_str().unwrap_or_default().to_string();
                    writeln!(out, "{},{},{ty},{},{},{},{}", gens.kind, gens.level, m.a, m.b, m.c, m.d).unwrap();
                }
            }
        }
        Format::Table => {
            for (symbol, gens) in sets {
                writeln!(
                    out,
                    "{}({}): index {}, e2 {}, e3 {}, r {}",
                    gens.kind, gens.level, gens.index, gens.e2, gens.e3, gens.r
                )
                .unwrap();
                writeln!(out, "  Farey symbol: {symbol}").unwrap();
                for g in &gens.generators {
                    writeln!(out, "  {:<5} {}", format!("{:?}", g.kind).to_lowercase(), g.matrix).unwrap();
                }
            }
        }
    }
    Ok(out)
}

pub fn scoreboard(board: &Scoreboard, format: Format) -> Result<String> {
    match format {
        Format::Json => json(board),
        Format::Csv => {
            let mut out = String::from("check,passed,cases,failures\n");
            for c in &board.checks {
                writeln!(out, "\"{}\",{},{},{}", c.name, c.passed, c.cases, c.failures.len()).unwrap();
            }
            Ok(out)
        }
        Format::Table => Ok(format!("{board}\n")),
    }
}

pub fn verified(w: &Witness, cert: &Certificate, format: Format) -> Result<String> {
    match format {
        Format::Json => json(cert),
        Format::Csv => Ok(format!(
            "kind,N,modulus,image_order,full_image_order\n{},{},{},{},{}\n",
            w.kind, w.level, cert.modulus, cert.image_order, cert.full_image_order
        )),
        Format::Table => Ok(format!(
            "witness for {}({}) verified: image order {} of {} mod {}\n",
            w.kind, w.level, cert.image_order, cert.full_image_order, cert.modulus
        )),
    }
}
