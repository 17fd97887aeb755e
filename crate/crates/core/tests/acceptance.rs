//! Acceptance criteria 1 to 9, one status line each.
//!
//! Runs without the libtest harness so every line is printed; the process
//! exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lcyclic::covers::{
    admissible_degree_tuples, count_conditioned, count_tuples, enumerate_extensions, extension_counts, genus_of,
    point_count, point_distribution, zeta_numerator, Conditions, EnumConfig, KummerClass,
};
use lcyclic::model::{compare_distributions, sum_distribution};
use lcyclic::oracle::enumerate_maps;
use lcyclic::places::{places_up_to, reciprocity_sign_exponent, residue_symbol, ResidueCharacter};
use lcyclic::rational::{int, inv_power, ratio, render, to_f64};
use lcyclic::series::{
    character_count_series, conditioned_series, constant_c, local_density, main_term_ratio_from, quadratic_exact,
    quadratic_ramified_display, quadratic_ramified_exact,
};
use lcyclic::{CharValue, FieldSpec, Place, Poly, SplittingType};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

/// Collects failed sub-checks of one criterion.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn outcome(self, summary: impl Into<String>) -> Outcome {
        let summary = summary.into();
        if self.failures.is_empty() {
            Outcome::new(true, format!("{summary} ({} checks)", self.checks))
        } else {
            let shown: Vec<&str> = self.failures.iter().take(4).map(String::as_str).collect();
            Outcome::new(
                false,
                format!("{summary}; {} of {} failed: {}", self.failures.len(), self.checks, shown.join("; ")),
            )
        }
    }
}

fn field(p: u64, e: u32, ell: u64) -> FieldSpec {
    FieldSpec::new(p, e, ell).expect("valid field")
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cfg = EnumConfig::default();
    let mut t = Tally::default();
    for p in [3u64, 5] {
        let fs = field(p, 1, 2);
        let q = BigInt::from(p);
        let series = character_count_series(6, &fs);
        for n in 1..=6usize {
            let brute = BigInt::from(extension_counts(n, &fs, &cfg).expect("within budget").characters);
            let closed = quadratic_exact(n, &fs).expect("ell = 2");
            let euler = series.coeff(n).as_integer().expect("integral").clone();
            let expected = match n {
                _ if n % 2 == 1 => BigInt::zero(),
                2 => BigInt::from(2) * q.pow(2),
                _ => BigInt::from(2) * (q.pow(n as u32) - q.pow(n as u32 - 2)),
            };
            t.check(brute == expected && closed == expected && euler == expected, || {
                format!("q={p} n={n}: brute {brute}, closed form {closed}, series {euler}, expected {expected}")
            });
        }
    }
    let elapsed = start.elapsed();
    t.check(within(elapsed, 30), || format!("runtime {elapsed:?} > 30s"));
    t.outcome(format!("exact ell=2 counts at q=3,5 for n<=6 agree across three pipelines in {elapsed:.1?}"))
}

fn criterion_2() -> Outcome {
    let fs = field(2, 2, 3);
    let series = character_count_series(6, &fs);
    let mut t = Tally::default();
    let mut timings = Vec::new();
    for shards in [1usize, 8] {
        let cfg = EnumConfig::with_shards(shards);
        let start = Instant::now();
        let mut row = Vec::new();
        for n in 1..=6usize {
            let covers = extension_counts(n, &fs, &cfg).expect("within budget").characters;
            let coef = series.coeff(n).as_integer().expect("integral").clone();
            let maps = enumerate_maps(n, &fs, &cfg).expect("within budget").len() as u64;
            t.check(BigInt::from(covers) == coef && covers == maps, || {
                format!("n={n}: covers {covers}, series {coef}, maps {maps}")
            });
            row.push(covers);
        }
        t.check(row[0] == 0 && row[1] == 60, || format!("n=1,2 gave {} and {}", row[0], row[1]));
        let elapsed = start.elapsed();
        let limit = if shards == 1 { 300 } else { 60 };
        t.check(within(elapsed, limit), || format!("{shards} shards took {elapsed:?} > {limit}s"));
        timings.push(format!("{shards} shard(s) {elapsed:.1?}"));
        if shards == 1 {
            timings.push(format!("counts {row:?}"));
        }
    }
    t.outcome(format!("ell=3 q=4 covers = series = maps for n<=6; {}", timings.join(", ")))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let fs = field(3, 1, 2);
    let cfg = EnumConfig::default();
    let x = Place::Finite(Poly::x());
    let mut t = Tally::default();
    let ram = Conditions::new(std::slice::from_ref(&x), &[], &[]).expect("one place");
    let r4 = count_conditioned(4, &ram, &fs, &cfg).expect("within budget");
    let c_r = local_density(1, SplittingType::Ramified, &fs);
    t.check(r4.matched.characters == 36 && r4.total.characters == 144, || {
        format!("N(4, ram X) = {} of {}", r4.matched.characters, r4.total.characters)
    });
    t.check(r4.density == Some(ratio(1, 4)) && c_r == ratio(1, 4), || {
        format!("density {:?}, c_v {}", r4.density.as_ref().map(render), render(&c_r))
    });
    let c_s = local_density(1, SplittingType::Split, &fs);
    let c_i = local_density(1, SplittingType::Inert, &fs);
    t.check(c_s == ratio(3, 8) && c_i == ratio(3, 8), || format!("c_split {}, c_inert {}", render(&c_s), render(&c_i)));
    let mut shown = Vec::new();
    for n in [8usize, 12] {
        let mut sum = BigRational::zero();
        let mut parts = Vec::new();
        for typ in [SplittingType::Ramified, SplittingType::Split, SplittingType::Inert] {
            let conds = Conditions::from_pairs([(x.clone(), typ)]).expect("one place");
            let c = count_conditioned(n, &conds, &fs, &cfg).expect("within budget");
            let series = conditioned_series(n, &conds, &fs).expect("below the conditioned cap");
            t.check(series.coefficient(n) == BigInt::from(c.matched.characters), || {
                format!("n={n} {typ}: brute {} vs series {}", c.matched.characters, series.coefficient(n))
            });
            let d = c.density.expect("nonempty");
            if typ != SplittingType::Ramified {
                let gap = to_f64(&(&d - ratio(3, 8)).abs());
                t.check(gap <= 0.05, || format!("n={n} {typ} density {} is {gap:.4} from 3/8", to_f64(&d)));
            }
            parts.push(format!("{typ} {:.4}", to_f64(&d)));
            sum += d;
        }
        t.check(sum == int(1), || format!("n={n}: trichotomy sums to {}", render(&sum)));
        shown.push(format!("n={n}: {}", parts.join(" ")));
    }
    let elapsed = start.elapsed();
    t.check(within(elapsed, 120), || format!("runtime {elapsed:?} > 120s"));
    t.outcome(format!("N(4, ram X)=36, density 1/4; {}; {elapsed:.1?}", shown.join("; ")))
}

fn criterion_4() -> Outcome {
    let cfg = EnumConfig::default();
    let mut t = Tally::default();
    let mut ratios = Vec::new();
    for p in [3u64, 5] {
        let fs = field(p, 1, 2);
        let places = places_up_to(2, &fs).expect("small field");
        for v in places.iter().filter(|v| !v.is_infinite()).take(3) {
            let d = v.degree();
            let conds = Conditions::new(std::slice::from_ref(v), &[], &[]).expect("one place");
            let nmax = if p == 3 { 8 } else { 6 };
            for n in d + 1..=nmax {
                let brute = count_conditioned(n, &conds, &fs, &cfg).expect("within budget").matched.characters;
                let exact = quadratic_ramified_exact(n, d, &fs).expect("ell = 2");
                let display = quadratic_ramified_display(n, d, &fs).expect("ell = 2");
                t.check(BigInt::from(brute) == exact, || {
                    format!("q={p} v={} n={n}: brute {brute}, series {exact}", v.render(&fs))
                });
                let observed = BigRational::from_integer(BigInt::from(brute)) / &display;
                let want = if n % 2 == 0 { int(2) } else { int(0) };
                t.check(n < 4 || observed == want, || {
                    format!("q={p} deg v={d} n={n}: brute/display = {}", render(&observed))
                });
                if p == 3 && d == 1 && v == &Place::Finite(Poly::x()) && (4..=5).contains(&n) {
                    ratios.push(format!(
                        "n={n} brute {brute} display {} ratio {}",
                        render(&display),
                        render(&observed)
                    ));
                }
            }
        }
    }
    t.outcome(format!("ramified display off by the parity factor: {}", ratios.join("; ")))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let fs = field(3, 1, 2);
    let cfg = EnumConfig::default();
    let model = sum_distribution(fs.q() as usize + 1, &fs);
    let mut t = Tally::default();
    t.check(model.mean() == int(4), || format!("model mean {}", render(&model.mean())));
    let mut tv = Vec::new();
    for g in 2..=5u64 {
        let d = point_distribution(g, &fs, &cfg).expect("within budget");
        let cmp = compare_distributions(&d.dist, &model);
        let mean = to_f64(&cmp.mean_a);
        if g >= 3 {
            t.check((mean - 4.0).abs() <= 0.5, || format!("g={g}: empirical mean {mean}"));
        }
        tv.push((g, cmp.total_variation_f64(), d.fields));
    }
    let tv2 = tv[0].1;
    let tv5 = tv[3].1;
    t.check(tv5 <= 0.1, || format!("TV at g=5 is {tv5}"));
    t.check(tv5 < tv2, || format!("TV at g=5 ({tv5}) not below g=2 ({tv2})"));
    let elapsed = start.elapsed();
    t.check(within(elapsed, 600), || format!("runtime {elapsed:?} > 600s"));
    let shown: Vec<String> = tv.iter().map(|(g, d, f)| format!("g={g} TV {d:.5} ({f} fields)")).collect();
    t.outcome(format!("{}; {elapsed:.1?}", shown.join(", ")))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut t = Tally::default();
    for p in [3u64, 5, 7] {
        let fs = field(p, 1, 2);
        for d in [1usize, 4, 12] {
            let c = constant_c(d, &fs).expect("positive cutoff");
            let want = int(1) - inv_power(fs.q(), 2);
            t.check(c.exact.as_ref() == Some(&want), || {
                format!("C2 at q={p}, D={d} is {:?}", c.exact.as_ref().map(render))
            });
        }
    }
    let fs = field(2, 2, 3);
    let c12 = constant_c(12, &fs).expect("positive cutoff").value;
    let c14 = constant_c(14, &fs).expect("positive cutoff").value;
    let rel = (c12 - c14).abs() / c14;
    t.check(rel <= 1e-6, || format!("|C(12)-C(14)|/C(14) = {rel:.2e}"));
    let series = character_count_series(30, &fs);
    let mut ratios = Vec::new();
    for n in 20..=30usize {
        let r = main_term_ratio_from(&series, n, 14, &fs).expect("inside truncation").ratio;
        t.check((r - 1.0).abs() <= 0.15, || format!("n={n} ratio {r:.4}"));
        ratios.push(r);
    }
    for w in 0..ratios.len() - 1 {
        let (a, b) = ((ratios[w] - 1.0).abs(), (ratios[w + 1] - 1.0).abs());
        t.check(b < a, || format!("defect grows from n={} ({a:.4}) to n={} ({b:.4})", 20 + w, 21 + w));
    }
    let elapsed = start.elapsed();
    t.check(within(elapsed, 60), || format!("runtime {elapsed:?} > 60s"));
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    t.outcome(format!(
        "C2 exact; C3(12)={c12:.9} rel diff {rel:.1e}; ratios n=20..30 [{}]; {elapsed:.1?}",
        shown.join(" ")
    ))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut t = Tally::default();
    let mut pairs = 0usize;
    let mut characters = 0usize;
    for (p, ell) in [(3u64, 2u64), (7, 3)] {
        let fs = field(p, 1, ell);
        let ell = fs.ell();
        let eps = reciprocity_sign_exponent(&fs);
        let finite: Vec<Poly> =
            places_up_to(3, &fs).expect("small field").into_iter().filter_map(|v| v.poly().cloned()).collect();
        for (i, a) in finite.iter().enumerate() {
            for b in &finite[i + 1..] {
                pairs += 1;
                let ab = residue_symbol(a, b, &fs);
                let ba = residue_symbol(b, a, &fs);
                let twist = CharValue::Exp((eps as usize * a.deg() * b.deg() % ell as usize) as u32);
                t.check(ab == twist.mul(ba, ell), || {
                    format!("q={p} ({}/{})={ab:?}, reverse {ba:?}", a.render(&fs), b.render(&fs))
                });
            }
        }
        for v in &finite {
            for k in 1..ell {
                characters += 1;
                let chi = ResidueCharacter::new(v.clone(), k, &fs).expect("monic irreducible");
                let extra = if p == 3 { 2 } else { 1 };
                for n in v.deg()..=v.deg() + extra {
                    let s = chi.character_sum(n, &fs);
                    t.check(s.is_zero(), || format!("q={p} chi_{}^{k}: A({n}) = {s}", v.render(&fs)));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    t.check(within(elapsed, 30), || format!("runtime {elapsed:?} > 30s"));
    t.outcome(format!(
        "reciprocity on {pairs} place pairs, L-sequences of {characters} characters vanish; {elapsed:.1?}"
    ))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let fs = field(3, 1, 2);
    let cfg = EnumConfig::default();
    let q = fs.q() as i64;
    let mut t = Tally::default();
    let mut curves = 0usize;
    for n in [2usize, 4, 6] {
        for orbit in enumerate_extensions(n, &fs, &cfg).expect("within budget").orbits {
            curves += 1;
            let c = &orbit.canonical;
            let g = genus_of(c).expect("nonconstant") as i64;
            let pts = c.rational_point_count(&fs) as i64;
            let dev = pts - (q + 1);
            t.check(dev * dev <= 4 * g * g * q, || format!("{}: #C(F_3) = {pts}, genus {g}", c.render(&fs)));
            let z = zeta_numerator(c, &fs).expect("small genus");
            let g = g as usize;
            t.check(z.len() == 2 * g + 1, || format!("{}: zeta numerator of length {}", c.render(&fs), z.len()));
            for i in 0..=g.min(z.len().saturating_sub(1)) {
                if z.len() != 2 * g + 1 {
                    break;
                }
                let lhs = &z[2 * g - i];
                let rhs = BigInt::from(q).pow((g - i) as u32) * &z[i];
                t.check(*lhs == rhs, || {
                    format!("{}: a_{} = {lhs}, q^{}·a_{i} = {rhs}", c.render(&fs), 2 * g - i, g - i)
                });
            }
        }
    }
    let y2 = KummerClass::new(0, vec![Poly::from_coeffs(vec![0, 2, 0, 1])], &fs).expect("square-free");
    let f9 = point_count(&y2, 2, &fs).expect("positive degree");
    t.check(f9 == 16, || format!("#C(F_9) for Y^2 = X^3 - X is {f9}"));
    let elapsed = start.elapsed();
    t.check(within(elapsed, 120), || format!("runtime {elapsed:?} > 120s"));
    t.outcome(format!(
        "Weil bound and functional equation on {curves} curves of genus <= 2, #C(F_9) = {f9}; {elapsed:.1?}"
    ))
}

fn criterion_9() -> Outcome {
    let cfg = EnumConfig::default();
    let mut t = Tally::default();
    for fs in [field(3, 1, 2), field(2, 2, 3)] {
        let ell = fs.ell() as u64;
        for n in 1..=6usize {
            let tuples: u64 = admissible_degree_tuples(n, fs.ell())
                .iter()
                .map(|d| count_tuples(d, &fs).expect("matching length"))
                .sum();
            let chars = extension_counts(n, &fs, &cfg).expect("within budget").characters;
            t.check(ell * tuples == chars, || {
                format!("q={} ell={ell} n={n}: ell*tuples {}, characters {chars}", fs.q(), ell * tuples)
            });
        }
    }
    t.outcome("ell * sum of tuple counts equals characters_count for n<=6 at (2,3), (3,4)")
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = Vec::new();
    for (id, run) in criteria {
        let out = run();
        println!("criterion {id}: {} {}", if out.pass { "PASS" } else { "FAIL" }, out.detail);
        if !out.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
