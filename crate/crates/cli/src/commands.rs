use std::fs;
use std::path::PathBuf;

use lcyclic::covers::{
    conductor_from_genus, count_conditioned, point_distribution, point_distribution_from_records, Conditions,
    EnumConfig, OrbitCache,
};
use lcyclic::model::{compare_distributions, sum_distribution};
use lcyclic::oracle::crosscheck_counts;
use lcyclic::rational::{int, ratio};
use lcyclic::series::{
    character_count_series, conditioned_series, constant_c, local_density, main_term_ratio_from, write_dump,
    CycloSeries,
};
use lcyclic::{Error, FieldSpec, Place, SplittingType};
use num_rational::BigRational;
use serde::Serialize;

use crate::report::{opt_exact, Exact, Report};
use crate::CliResult;

/// Shared state of one invocation.
pub struct Ctx {
    pub fs: FieldSpec,
    pub cfg: EnumConfig,
    pub cache: Option<OrbitCache>,
}

/// Parses `PLACE:TYPE` tokens with TYPE one of ram, split, inert.
pub fn parse_conditions(tokens: &[String], fs: &FieldSpec) -> lcyclic::Result<Conditions> {
    let mut pairs = Vec::new();
    for token in tokens {
        let (place, kind) = token
            .rsplit_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("condition {token:?} is not PLACE:TYPE")))?;
        let t = match kind.trim().to_ascii_lowercase().as_str() {
            "ram" | "ramified" => SplittingType::Ramified,
            "split" => SplittingType::Split,
            "inert" => SplittingType::Inert,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "condition {token:?}: unknown type {other:?} (expected ram, split or inert)"
                )))
            }
        };
        let v = Place::parse(place, fs).map_err(|e| Error::InvalidArgument(format!("condition {token:?}: {e}")))?;
        if let Some((_, old_t, old)) = pairs.iter().find(|(w, _, _)| *w == v) {
            let msg = format!("{old:?} and {token:?}");
            return Err(if *old_t == t { Error::DuplicatePlace(msg) } else { Error::OverlappingConditions(msg) });
        }
        pairs.push((v, t, token));
    }
    Conditions::from_pairs(pairs.into_iter().map(|(v, t, _)| (v, t)))
}

#[derive(Debug, Serialize)]
pub struct ConditionOut {
    place: String,
    #[serde(rename = "type")]
    kind: String,
    local_density: Exact,
}

fn conditions_out(conds: &Conditions, fs: &FieldSpec) -> Vec<ConditionOut> {
    conds
        .entries()
        .iter()
        .map(|(v, t)| ConditionOut {
            place: v.render(fs),
            kind: t.to_string(),
            local_density: Exact::of(&local_density(v.degree(), *t, fs)),
        })
        .collect()
}

fn predicted_density(conds: &Conditions, fs: &FieldSpec) -> BigRational {
    conds.entries().iter().fold(int(1), |acc, (v, t)| acc * local_density(v.degree(), *t, fs))
}

fn conditions_label(conds: &Conditions, fs: &FieldSpec) -> String {
    conds.entries().iter().map(|(v, t)| format!("{}:{t}", v.render(fs))).collect::<Vec<_>>().join(" ")
}

/// Series whose u^n coefficient counts characters meeting the conditions.
fn counting_series(trunc: usize, conds: &Conditions, fs: &FieldSpec) -> lcyclic::Result<CycloSeries> {
    if conds.is_empty() {
        Ok(character_count_series(trunc, fs))
    } else {
        Ok(conditioned_series(trunc, conds, fs)?.series)
    }
}

fn series_coefficient(s: &CycloSeries, n: usize) -> String {
    s.coeff(n).as_integer().expect("counting series are integral").to_string()
}

// count

#[derive(Debug, Serialize)]
pub struct CountReport {
    n: usize,
    conditions: Vec<ConditionOut>,
    fields_count: u64,
    characters_count: u64,
    matched_fields: u64,
    matched_characters: u64,
    density: Option<Exact>,
    predicted_density: Exact,
    series_coefficient: Option<String>,
    series_matches: Option<bool>,
}

impl Report for CountReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec![
            "n",
            "conditions",
            "fields_count",
            "characters_count",
            "matched_fields",
            "matched_characters",
            "density",
            "density_float",
            "predicted_density",
            "predicted_density_float",
            "series_coefficient",
            "series_matches",
        ]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let (d, df) = opt_exact(&self.density);
        let conds: Vec<String> = self.conditions.iter().map(|c| format!("{}:{}", c.place, c.kind)).collect();
        vec![vec![
            self.n.to_string(),
            conds.join(" "),
            self.fields_count.to_string(),
            self.characters_count.to_string(),
            self.matched_fields.to_string(),
            self.matched_characters.to_string(),
            d,
            df,
            self.predicted_density.exact.clone(),
            self.predicted_density.float.to_string(),
            self.series_coefficient.clone().unwrap_or_default(),
            self.series_matches.map(|b| b.to_string()).unwrap_or_default(),
        ]]
    }
}

pub fn count(ctx: &Ctx, n: usize, conds: &Conditions, truncation: Option<usize>) -> CliResult<CountReport> {
    let fs = &ctx.fs;
    let (fields, matched) = match &ctx.cache {
        Some(cache) => {
            let all = cache.load_or_compute(n, &Conditions::none(), fs, &ctx.cfg)?.0.len() as u64;
            let matched =
                if conds.is_empty() { all } else { cache.load_or_compute(n, conds, fs, &ctx.cfg)?.0.len() as u64 };
            (all, matched)
        }
        None => {
            let c = count_conditioned(n, conds, fs, &ctx.cfg)?;
            (c.total.fields, c.matched.fields)
        }
    };
    let l1 = fs.ell() as u64 - 1;
    let trunc = truncation.unwrap_or(n);
    if trunc < n {
        return Err(Error::InvalidArgument(format!("truncation {trunc} is below n = {n}")).into());
    }
    let series = match counting_series(trunc, conds, fs) {
        Ok(s) => Some(series_coefficient(&s, n)),
        Err(e) if e.is_budget() => None,
        Err(e) => return Err(e.into()),
    };
    Ok(CountReport {
        n,
        conditions: conditions_out(conds, fs),
        fields_count: fields,
        characters_count: fields * l1,
        matched_fields: matched,
        matched_characters: matched * l1,
        density: (fields > 0).then(|| Exact::of(&ratio(matched, fields))),
        predicted_density: Exact::of(&predicted_density(conds, fs)),
        series_matches: series.as_ref().map(|s| *s == (matched * l1).to_string()),
        series_coefficient: series,
    })
}

// distribution

#[derive(Debug, Serialize)]
pub struct GenusRow {
    genus: u64,
    conductor_degree: usize,
    fields: u64,
    empirical: Vec<Exact>,
    model: Vec<Exact>,
    total_variation: Exact,
    sup_distance: Exact,
    mean_empirical: Exact,
    mean_model: Exact,
}

#[derive(Debug, Serialize)]
pub struct DistributionReport {
    genera: Vec<GenusRow>,
}

impl Report for DistributionReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec![
            "genus",
            "m",
            "empirical",
            "empirical_float",
            "model",
            "model_float",
            "total_variation",
            "mean_empirical",
            "mean_model",
        ]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let mut rows = Vec::new();
        for g in &self.genera {
            for (m, (e, md)) in g.empirical.iter().zip(&g.model).enumerate() {
                rows.push(vec![
                    g.genus.to_string(),
                    m.to_string(),
                    e.exact.clone(),
                    e.float.to_string(),
                    md.exact.clone(),
                    md.float.to_string(),
                    g.total_variation.exact.clone(),
                    g.mean_empirical.exact.clone(),
                    g.mean_model.exact.clone(),
                ]);
            }
        }
        rows
    }
}

pub fn distribution(ctx: &Ctx, genera: &[u64]) -> CliResult<DistributionReport> {
    let fs = &ctx.fs;
    let len = fs.ell() as usize * (fs.q() as usize + 1) + 1;
    let model = sum_distribution(fs.q() as usize + 1, fs).padded(len);
    let mut rows = Vec::new();
    for &g in genera {
        let d = match &ctx.cache {
            Some(cache) => {
                let n = conductor_from_genus(g, fs.ell())?;
                let (records, _) = cache.load_or_compute(n, &Conditions::none(), fs, &ctx.cfg)?;
                point_distribution_from_records(g, &records, fs)?
            }
            None => point_distribution(g, fs, &ctx.cfg)?,
        };
        let empirical = d.dist.padded(len);
        let cmp = compare_distributions(&empirical, &model);
        rows.push(GenusRow {
            genus: g,
            conductor_degree: d.conductor_degree,
            fields: d.fields,
            empirical: empirical.probs.iter().map(Exact::of).collect(),
            model: model.probs.iter().map(Exact::of).collect(),
            total_variation: Exact::of(&cmp.total_variation),
            sup_distance: Exact::of(&cmp.sup_distance),
            mean_empirical: Exact::of(&cmp.mean_a),
            mean_model: Exact::of(&cmp.mean_b),
        });
    }
    Ok(DistributionReport { genera: rows })
}

// series-check

#[derive(Debug, Serialize)]
pub struct SeriesRow {
    n: usize,
    series: String,
    enumerated: u64,
    matches: bool,
}

#[derive(Debug, Serialize)]
pub struct SeriesCheckReport {
    truncation: usize,
    conditions: Vec<ConditionOut>,
    rows: Vec<SeriesRow>,
    all_match: bool,
}

impl SeriesCheckReport {
    pub fn passed(&self) -> bool {
        self.all_match
    }
}

impl Report for SeriesCheckReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["n", "series", "enumerated", "matches"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| vec![r.n.to_string(), r.series.clone(), r.enumerated.to_string(), r.matches.to_string()])
            .collect()
    }
}

pub fn series_check(
    ctx: &Ctx,
    max_n: usize,
    conds: &Conditions,
    truncation: Option<usize>,
    dump: Option<&PathBuf>,
) -> CliResult<SeriesCheckReport> {
    let fs = &ctx.fs;
    let trunc = truncation.unwrap_or(max_n).max(max_n);
    let series = counting_series(trunc, conds, fs)?;
    if let Some(path) = dump {
        let construction = if conds.is_empty() {
            "characters".to_string()
        } else {
            format!("conditioned:{}", conds.canonical_string())
        };
        fs::write(path, write_dump(&series, fs, &construction))?;
    }
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let enumerated = count_conditioned(n, conds, fs, &ctx.cfg)?.matched.characters;
        let s = series_coefficient(&series, n);
        rows.push(SeriesRow { n, matches: s == enumerated.to_string(), series: s, enumerated });
    }
    Ok(SeriesCheckReport {
        truncation: trunc,
        conditions: conditions_out(conds, fs),
        all_match: rows.iter().all(|r| r.matches),
        rows,
    })
}

// constants

#[derive(Debug, Serialize)]
pub struct RatioRow {
    n: usize,
    coefficient: String,
    main_term: f64,
    ratio: f64,
    exact_ratio: Option<Exact>,
}

#[derive(Debug, Serialize)]
pub struct ConstantsReport {
    cutoff: usize,
    constant: f64,
    constant_exact: Option<Exact>,
    cauchy_defect: f64,
    tail_bound: f64,
    conditions: Vec<ConditionOut>,
    predicted_density: Exact,
    main_term: Vec<RatioRow>,
}

impl Report for ConstantsReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["cutoff", "constant", "cauchy_defect", "tail_bound", "n", "coefficient", "main_term", "ratio"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let head = vec![
            self.cutoff.to_string(),
            self.constant.to_string(),
            self.cauchy_defect.to_string(),
            self.tail_bound.to_string(),
        ];
        if self.main_term.is_empty() {
            return vec![[head, vec![String::new(); 4]].concat()];
        }
        self.main_term
            .iter()
            .map(|r| {
                let tail = vec![r.n.to_string(), r.coefficient.clone(), r.main_term.to_string(), r.ratio.to_string()];
                [head.clone(), tail].concat()
            })
            .collect()
    }
}

pub fn constants(
    ctx: &Ctx,
    cutoff: usize,
    range: Option<(usize, usize)>,
    conds: &Conditions,
) -> CliResult<ConstantsReport> {
    let fs = &ctx.fs;
    let c = constant_c(cutoff, fs)?;
    let mut main_term = Vec::new();
    if let Some((lo, hi)) = range {
        if lo == 0 || lo > hi {
            return Err(Error::InvalidArgument(format!("empty range {lo}..={hi}")).into());
        }
        let series = character_count_series(hi, fs);
        for n in lo..=hi {
            let r = main_term_ratio_from(&series, n, cutoff, fs)?;
            main_term.push(RatioRow {
                n,
                coefficient: r.coefficient.to_string(),
                main_term: r.main_term,
                ratio: r.ratio,
                exact_ratio: r.exact_ratio.as_ref().map(Exact::of),
            });
        }
    }
    Ok(ConstantsReport {
        cutoff,
        constant: c.value,
        constant_exact: c.exact.as_ref().map(Exact::of),
        cauchy_defect: c.defect,
        tail_bound: c.tail_bound,
        conditions: conditions_out(conds, fs),
        predicted_density: Exact::of(&predicted_density(conds, fs)),
        main_term,
    })
}

// oracle-crosscheck

#[derive(Debug, Serialize)]
pub struct CrosscheckRow {
    n: usize,
    covers_characters: u64,
    map_count: u64,
    matches: bool,
}

#[derive(Debug, Serialize)]
pub struct CrosscheckReport {
    conditions: String,
    rows: Vec<CrosscheckRow>,
    all_match: bool,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.all_match
    }
}

impl Report for CrosscheckReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["n", "conditions", "covers_characters", "map_count", "matches"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    self.conditions.clone(),
                    r.covers_characters.to_string(),
                    r.map_count.to_string(),
                    r.matches.to_string(),
                ]
            })
            .collect()
    }
}

pub fn oracle_crosscheck(ctx: &Ctx, ns: &[usize], conds: &Conditions) -> CliResult<CrosscheckReport> {
    let mut rows = Vec::new();
    for &n in ns {
        let r = crosscheck_counts(n, conds, &ctx.fs, &ctx.cfg)?;
        rows.push(CrosscheckRow {
            n,
            covers_characters: r.covers_characters,
            map_count: r.map_count,
            matches: r.matches,
        });
    }
    Ok(CrosscheckReport {
        conditions: conditions_label(conds, &ctx.fs),
        all_match: rows.iter().all(|r| r.matches),
        rows,
    })
}
