//! `arithtop`: command-line front end.

mod report;
mod selftest;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use arithtop::chainring::{link_rank_polynomial, prime_rank_polynomial, zeta_rank_inversion};
use arithtop::classgroup::{self, predict_vs_oracle};
use arithtop::covering::{self, FiniteAction};
use arithtop::linkinv::{
    alexander_polynomial, branched_cover_order, cover_homology_ranks, linking_numbers,
    pd_to_wirtinger, wirtinger_longitudes, LinkInput, LinkPresentation, PDCode,
    WirtingerPresentation,
};
use arithtop::magnus::{check_symmetries, milnor_table, Modulus};
use arithtop::primeinv::{
    self, arith_milnor_table, class_group_prediction, four_rank_prediction, legendre, lk_l,
    power_residue_index, redei_matrix, redei_triple, t_s_matrix, PrimeSet, Provenance, UserMuTable,
};

use report::Report;

#[derive(Parser)]
#[command(
    name = "arithtop",
    version,
    about = "Linking invariants of knots and primes"
)]
struct Cli {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Linking numbers, Milnor invariants, Alexander data and T_L^(d) ranks of a link.
    Link {
        /// A `.pd` diagram or a JSON file (`{"pd":…,"signs":…}` or `{"n":…,"longitudes":[…]}`).
        input: PathBuf,
        /// Longest Milnor multi-index.
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[arg(long, default_value_t = 2)]
        l: u64,
        /// Largest d for the p^d-ranks (at most --degree).
        #[arg(long)]
        d: Option<u32>,
    },
    /// Power residue symbols, Rédei symbols and class-group predictions for primes.
    Primes {
        #[arg(required = true)]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        l: u64,
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Extra Milnor numbers as `{"m": 8, "entries": {"1 2 1": 3}}`.
        #[arg(long)]
        mu_table: Option<PathBuf>,
        /// Compare with the narrow class group computed from binary quadratic forms.
        #[arg(long)]
        verify: bool,
    },
    /// Narrow class group of a quadratic field.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Decomposition data of a covering, or a transfer kernel.
    Covering {
        /// `{"degree":n,"gens":{"tau":[…],"sigma":[…],…}}` or `{"degree":m,"gens":[…],"subgroup":[…]}`.
        input: PathBuf,
    },
    /// Ranks a_1..a_D from the lower-central-series polynomial.
    ZetaRanks {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: i128,
        #[arg(long, default_value_t = 6)]
        deg: usize,
    },
    /// Runs the bundled worked examples.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Link,
    Primes,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli, echo.join(" ")) {
        Ok(r) => {
            let out = if cli.json {
                serde_json::to_string_pretty(&r).expect("report serializes") + "\n"
            } else {
                r.text.clone()
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().write_all(out.as_bytes());
            if r.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, echo: String) -> Result<Report> {
    match &cli.command {
        Command::Link {
            input,
            degree,
            l,
            d,
        } => link(echo, input, *degree, *l, d.unwrap_or(*degree as u32)),
        Command::Primes {
            primes,
            l,
            d,
            mu_table,
            verify,
        } => primes_cmd(echo, primes, *l, *d, mu_table.as_deref(), *verify),
        Command::Classgroup { disc } => classgroup_cmd(echo, *disc),
        Command::Covering { input } => covering_cmd(echo, input),
        Command::ZetaRanks { kind, n, deg } => zeta_ranks(echo, *kind, *n, *deg),
        Command::Selftest => Ok(selftest::run(echo)),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_link(
    path: &Path,
    depth: usize,
) -> Result<(Option<WirtingerPresentation>, LinkPresentation)> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "pd") {
        let w = pd_to_wirtinger(&PDCode::parse(&text)?)?;
        let lp = wirtinger_longitudes(&w, depth)?;
        return Ok((Some(w), lp));
    }
    let loaded = LinkInput::from_json(&text)?.load(depth)?;
    Ok((loaded.wirtinger, loaded.presentation))
}

#[derive(Serialize)]
struct KnotData {
    alexander: String,
    alexander_at_one: i128,
    /// Orders of H_1 of the n-fold cyclic branched covers, n = 2..=6 (0 = infinite).
    cover_orders: Vec<String>,
}

fn link(echo: String, input: &Path, degree: usize, l: u64, d: u32) -> Result<Report> {
    if d as usize > degree {
        bail!("--d {d} needs Milnor numbers up to length {d}; raise --degree");
    }
    let (w, lp) = load_link(input, degree)?;
    let lk = linking_numbers(&lp)?;
    let table = milnor_table(lp.longitudes(), degree.max(2), Modulus::Integer)?;
    let sym = check_symmetries(&table);
    let mut r = Report::new("link", echo);
    r.input("file", input.display().to_string());
    r.input("degree", degree);
    r.input("l", l);
    r.input("d", d);
    r.line(format!("components: {}", lp.n()));
    r.line("linking matrix:".into());
    for row in &lk {
        r.line(format!(
            "  {}",
            row.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        ));
    }
    r.result("linking_matrix", &lk);
    r.result("longitudes", lp.longitudes());
    let nonzero: Vec<String> = table
        .entries()
        .filter(|(idx, e)| idx.len() > 2 && e.mubar != 0)
        .map(|(idx, e)| {
            if e.delta == 0 {
                format!("{idx}: {}", e.mubar)
            } else {
                format!("{idx}: {} (mod {})", e.mubar, e.delta)
            }
        })
        .collect();
    r.line(format!(
        "nonzero Milnor invariants of length 3..{degree}: {}",
        if nonzero.is_empty() {
            "none".into()
        } else {
            nonzero.join(", ")
        }
    ));
    r.result("milnor", &table);
    r.line(format!(
        "symmetry checks: {} cyclic, {} shuffle, {} violations",
        sym.cyclic_checked,
        sym.shuffle_checked,
        sym.violations.len()
    ));
    if !sym.is_clean() {
        r.fail();
    }
    r.result("symmetry", &sym);
    if let (Some(w), 1) = (&w, lp.n()) {
        let delta = alexander_polynomial(w)?;
        let orders = (2..=6)
            .map(|n| branched_cover_order(&delta, n).map(|o| o.to_string()))
            .collect::<arithtop::Result<Vec<_>>>()?;
        r.line(format!("Alexander polynomial: {delta}"));
        let shown: Vec<&str> = orders
            .iter()
            .map(|o| if o == "0" { "infinite" } else { o.as_str() })
            .collect();
        r.line(format!(
            "cyclic branched cover orders (n = 2..6): {}",
            shown.join(", ")
        ));
        r.result(
            "knot",
            &KnotData {
                alexander: delta.to_string(),
                alexander_at_one: delta.eval_at_one(),
                cover_orders: orders,
            },
        );
    }
    if d >= 1 {
        let ranks = cover_homology_ranks(&table, l, d)?;
        r.line(format!("p^d-ranks over O/p^d, l = {l}: e = {:?}", ranks.e));
        r.line(format!(
            "H_1 of the l-fold cover (l-part): {}",
            ranks.structure
        ));
        if lp.n() >= 2 {
            r.note(
                "ranks assume the l-fold cyclic branched cover is a rational homology sphere"
                    .into(),
            );
        }
        r.result("cover_ranks", &ranks);
    }
    Ok(r)
}

#[derive(Serialize)]
struct RedeiRow {
    primes: [u64; 3],
    symbol: Option<i8>,
    witness: Option<[i64; 3]>,
    note: Option<String>,
}

fn primes_cmd(
    echo: String,
    primes: &[u64],
    l: u64,
    d: u32,
    mu_table: Option<&Path>,
    verify: bool,
) -> Result<Report> {
    let s = PrimeSet::new(l, primes.to_vec())?;
    let user = mu_table
        .map(|p| read(p).and_then(|t| Ok(UserMuTable::from_json(&t)?)))
        .transpose()?;
    let mut r = Report::new("primes", echo);
    r.input("primes", primes);
    r.input("l", l);
    r.input("d", d);
    r.input("search_cap", primeinv::search_cap());
    let n = primes.len();
    r.line(format!("S = {primes:?}, l = {l}, e_S = {}", s.e_s()));
    let lk: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Ok(0)
                    } else {
                        lk_l(primes[i], primes[j], l)
                    }
                })
                .collect()
        })
        .collect::<arithtop::Result<_>>()?;
    r.line("lk_l(p_i, p_j):".into());
    for row in &lk {
        r.line(format!(
            "  {}",
            row.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        ));
    }
    r.result("lk", &lk);
    if l == 2 {
        let leg: Vec<Vec<i8>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Ok(0)
                        } else {
                            legendre(primes[j] as i128, primes[i])
                        }
                    })
                    .collect()
            })
            .collect::<arithtop::Result<_>>()?;
        r.result("legendre", &leg);
        let mu4: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Ok(0)
                        } else {
                            power_residue_index(primes[j] as i128, primes[i], 4)
                        }
                    })
                    .collect()
            })
            .collect::<arithtop::Result<_>>()?;
        r.line(format!("mu_4(ij): {mu4:?}"));
        r.result("mu_4", &mu4);
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let ps = [primes[i], primes[j], primes[k]];
                    match redei_triple(ps[0], ps[1], ps[2]) {
                        Ok(w) => {
                            r.line(format!(
                                "[{}, {}, {}] = {}  (a, b, c) = ({}, {}, {})",
                                ps[0], ps[1], ps[2], w.symbol, w.a, w.b, w.c
                            ));
                            rows.push(RedeiRow {
                                primes: ps,
                                symbol: Some(w.symbol),
                                witness: Some([w.a, w.b, w.c]),
                                note: None,
                            });
                        }
                        Err(e) => rows.push(RedeiRow {
                            primes: ps,
                            symbol: None,
                            witness: None,
                            note: Some(e.to_string()),
                        }),
                    }
                }
            }
        }
        r.result("redei", &rows);
    }
    let tm = redei_matrix(&s)?;
    let e2 = four_rank_prediction(&s)?;
    r.line(format!("linking matrix mod l: {tm:?}, e_2 = {e2}"));
    r.result("redei_matrix", &tm);
    r.result("e2_from_linking_matrix", &e2);
    let m = l.pow(
        s.e_s()
            .min(((d.max(2) - 1) as u64).div_ceil(l - 1) as u32)
            .max(1),
    );
    let mut table = arith_milnor_table(&s, m)?;
    if let Some(u) = &user {
        table.merge_user(u)?;
    }
    let supplied = table
        .entries
        .values()
        .filter(|e| e.provenance == Provenance::UserSupplied)
        .count();
    if supplied > 0 {
        r.note(format!("{supplied} Milnor numbers are user-supplied"));
    }
    let sym = table.shuffle_check()?;
    r.line(format!(
        "shuffle relations: {} evaluated, {} violations with |Hk| <= l^e_S",
        sym.shuffle_checked,
        sym.violations.len()
    ));
    if !sym.is_clean() {
        r.fail();
    }
    r.result("milnor", &table);
    r.result("symmetry", &sym);
    let tsd = t_s_matrix(&table, d)?;
    r.line(format!(
        "T_S^({d}) over O/p^{d}: {}",
        serde_json::to_string(&tsd)?
    ));
    r.result("t_s_matrix", &tsd);
    let pred = class_group_prediction(&s, d, user.as_ref())?;
    r.line(format!(
        "e = {:?}, predicted l-part: {}",
        pred.e, pred.structure
    ));
    r.result("prediction", &pred);
    if verify {
        let cmp = predict_vs_oracle(&s, d, user.as_ref())?;
        r.line(format!(
            "oracle: Cl+({}) = {}, 2-part {}, e = {:?}: {}",
            cmp.discriminant,
            cmp.class_group,
            cmp.oracle_sylow,
            cmp.oracle_e,
            if cmp.pass { "PASS" } else { "FAIL" }
        ));
        if !cmp.pass {
            r.fail();
        }
        r.result("verify", &cmp);
    }
    Ok(r)
}

fn classgroup_cmd(echo: String, disc: i64) -> Result<Report> {
    #[derive(Serialize)]
    struct Out {
        invariant_factors: Vec<u64>,
        order: u64,
    }
    let g = classgroup::narrow_class_group(disc)?;
    let mut r = Report::bare(echo);
    r.line(format!("Cl+({disc}) = {g}, order {}", g.order()));
    r.set_body(&Out {
        invariant_factors: g.invariant_factors.clone(),
        order: g.order(),
    });
    Ok(r)
}

fn covering_cmd(echo: String, input: &Path) -> Result<Report> {
    let text = read(input)?;
    let mut r = Report::new("covering", echo);
    r.input("file", input.display().to_string());
    let value: serde_json::Value = serde_json::from_str(&text).context("covering JSON")?;
    if value.get("subgroup").is_some() {
        let (g, h) = covering::transfer_input_from_json(&text)?;
        let t = covering::transfer_kernel(&g, &h)?;
        r.line(format!(
            "|Γ| = {}, |H| = {}, [Γ:H] = {}; Γ/Γ' = {}; transfer kernel {} of order {} (divisible by the index: {})",
            t.group_order, t.subgroup_order, t.index, t.abelianization, t.kernel, t.kernel_order, t.divisible_by_index
        ));
        if !t.divisible_by_index {
            r.fail();
        }
        r.result("transfer", &t);
        return Ok(r);
    }
    let act = FiniteAction::from_json(&text)?;
    let dec = covering::decompose(&act)?;
    r.line(format!("n = {}, r = {}", dec.n, dec.r));
    for o in &dec.orbits {
        r.line(format!("  orbit {:?}: e = {}, f = {}", o.points, o.e, o.f));
    }
    r.result("decomposition", &dec);
    match covering::galois_check(&act) {
        Ok(g) => {
            r.line(format!(
                "Galois: #I = {}, #D = {}, n = efr: {}, all checks: {}",
                g.inertia_order,
                g.decomposition_order,
                g.n_equals_efr,
                g.pass()
            ));
            if !g.pass() {
                r.fail();
            }
            r.result("galois", &g);
        }
        Err(arithtop::Error::Precondition(msg)) => r.note(format!("Galois checks skipped: {msg}")),
        Err(e) => return Err(e.into()),
    }
    Ok(r)
}

fn zeta_ranks(echo: String, kind: Kind, n: i128, deg: usize) -> Result<Report> {
    let f = match kind {
        Kind::Link => link_rank_polynomial(n),
        Kind::Primes => prime_rank_polynomial(n),
    };
    let a = zeta_rank_inversion(&f, deg)?;
    let mut r = Report::new("zeta-ranks", echo);
    r.input("kind", kind);
    r.input("n", n);
    r.input("deg", deg);
    r.line(format!("a_1..a_{deg} = {:?}", a.0));
    r.result("ranks", &a.0);
    Ok(r)
}
