//! Worked examples bundled as a regression run.

use serde::Serialize;

use arithtop::classgroup::{narrow_class_group, predict_vs_oracle, two_sylow};
use arithtop::fixtures;
use arithtop::linkinv::{
    cover_homology_ranks, linking_numbers, pd_to_wirtinger, wirtinger_longitudes, PDCode,
};
use arithtop::magnus::{check_symmetries, milnor_table, MilnorTable, Modulus};
use arithtop::primeinv::{
    arith_milnor_table, class_group_prediction, four_rank_prediction, lk_l, power_residue_index,
    redei_triple, t_s_matrix, PrimeSet,
};

use crate::report::Report;

#[derive(Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn link_table(name: &str) -> arithtop::Result<(Vec<Vec<i64>>, MilnorTable)> {
    let text = fixtures::diagram(name).expect("bundled diagram");
    let w = pd_to_wirtinger(&PDCode::parse(text)?)?;
    let lp = wirtinger_longitudes(&w, 4)?;
    Ok((
        linking_numbers(&lp)?,
        milnor_table(lp.longitudes(), 4, Modulus::Integer)?,
    ))
}

fn borromean_links() -> arithtop::Result<(bool, String)> {
    let (lk, t) = link_table("borromean")?;
    let zero_lk = lk.iter().flatten().all(|&x| x == 0);
    let triples: Vec<i128> = [
        [1, 2, 3],
        [2, 3, 1],
        [3, 1, 2],
        [1, 3, 2],
        [3, 2, 1],
        [2, 1, 3],
    ]
    .iter()
    .map(|i| t.mubar(i).unwrap_or(0))
    .collect();
    let ok = zero_lk
        && triples.iter().all(|v| v.abs() == 1)
        && triples[0] == triples[1]
        && triples[1] == triples[2]
        && check_symmetries(&t).is_clean();
    Ok((
        ok,
        format!("lk = 0: {zero_lk}, mubar(123,231,312,132,321,213) = {triples:?}"),
    ))
}

fn whitehead_milnor() -> arithtop::Result<(bool, String)> {
    let (_, t) = link_table("whitehead")?;
    let low_zero = t
        .entries()
        .filter(|(i, _)| i.len() <= 3)
        .all(|(_, e)| e.mubar == 0);
    let a = t.mubar(&[1, 1, 2, 2]).unwrap_or(0);
    let b = t.mubar(&[1, 2, 1, 2]).unwrap_or(0);
    Ok((
        low_zero && a == 1 && b == -2,
        format!("|I| <= 3 vanish: {low_zero}, mubar(1122) = {a}, mubar(1212) = {b}"),
    ))
}

fn whitehead_ranks(l: u64) -> arithtop::Result<(bool, String)> {
    let (_, t) = link_table("whitehead")?;
    let r = cover_homology_ranks(&t, l, 4)?;
    Ok((
        r.e[2] == 1 && r.e[3] == 0 && r.structure.exponents == [3],
        format!("e = {:?}, H = {}", r.e, r.structure),
    ))
}

fn borromean_primes() -> arithtop::Result<(bool, String)> {
    let ps = [13u64, 61, 937];
    let mut lk_zero = true;
    let mut mu4_zero = true;
    for &p in &ps {
        for &q in &ps {
            if p != q {
                lk_zero &= lk_l(p, q, 2)? == 0;
                mu4_zero &= power_residue_index(q as i128, p, 4)? == 0;
            }
        }
    }
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut symbols = Vec::new();
    for p in perms {
        symbols.push(redei_triple(ps[p[0]], ps[p[1]], ps[p[2]])?.symbol);
    }
    let s = PrimeSet::new(2, ps.to_vec())?;
    let t = arith_milnor_table(&s, 2)?;
    let mu2_ok = perms.iter().all(|p| {
        let idx: Vec<u32> = p.iter().map(|&i| i as u32 + 1).collect();
        t.get(&idx).and_then(|e| e.value) == Some(1)
    });
    let ok = lk_zero && mu4_zero && symbols.iter().all(|&x| x == -1) && mu2_ok;
    Ok((ok, format!("lk_2 = 0: {lk_zero}, mu_4 = 0: {mu4_zero}, Rédei symbols {symbols:?}, mu_2(ijk) = 1: {mu2_ok}")))
}

fn borromean_class_group() -> arithtop::Result<(bool, String)> {
    let s = PrimeSet::new(2, vec![13, 61, 937])?;
    let e2 = four_rank_prediction(&s)?;
    let t = arith_milnor_table(&s, 4)?;
    let m = t_s_matrix(&t, 3)?.to_residues();
    let expect = vec![vec![0, 4, 4], vec![4, 0, 4], vec![4, 4, 0]];
    let p = class_group_prediction(&s, 3, None)?;
    let sylow = two_sylow(&narrow_class_group(743041)?, 2);
    let cmp = predict_vs_oracle(&s, 3, None)?;
    let ok = e2 == 2
        && m.as_ref() == Some(&expect)
        && p.e == [2, 2, 0]
        && p.structure.to_string() == "Z/4 + Z/4"
        && sylow.to_string() == "Z/4 + Z/4"
        && cmp.pass;
    Ok((
        ok,
        format!(
            "e_2 = {e2}, T_S^(3) = {m:?}, e = {:?}, predicted {}, oracle 2-Sylow {sylow}",
            p.e, p.structure
        ),
    ))
}

pub fn run(echo: String) -> Report {
    let cases: Vec<(&'static str, fn() -> arithtop::Result<(bool, String)>)> = vec![
        ("borromean rings: Milnor invariants", borromean_links),
        ("whitehead link: Milnor invariants", whitehead_milnor),
        ("whitehead link: ranks, l = 2", || whitehead_ranks(2)),
        ("whitehead link: ranks, l = 3", || whitehead_ranks(3)),
        (
            "primes 13, 61, 937: linking and Rédei symbols",
            borromean_primes,
        ),
        ("primes 13, 61, 937: class group", borromean_class_group),
    ];
    let mut r = Report::new("selftest", echo);
    let mut checks = Vec::new();
    for (name, f) in cases {
        let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        r.line(format!(
            "{} {name}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        ));
        if !pass {
            r.fail();
        }
        checks.push(Check { name, pass, detail });
    }
    r.result("checks", &checks);
    r
}
