use arithtop::fixtures::{diagram, DIAGRAMS};
use arithtop::linkinv::{
    cover_homology_ranks, linking_numbers, nilpotent_rep, pd_to_wirtinger, t_l_matrix,
    wirtinger_longitudes, LinkInput, LinkPresentation, PDCode,
};
use arithtop::magnus::{check_symmetries, milnor_table, MilnorTable, Modulus, MultiIndex};

fn load(name: &str) -> (LinkPresentation, MilnorTable) {
    let w = pd_to_wirtinger(&PDCode::parse(diagram(name).unwrap()).unwrap()).unwrap();
    let lp = wirtinger_longitudes(&w, 4).unwrap();
    let t = milnor_table(lp.longitudes(), 4, Modulus::Integer).unwrap();
    (lp, t)
}

#[test]
fn longitudes_are_zero_framed() {
    for (name, _) in DIAGRAMS {
        let (lp, _) = load(name);
        for (j, l) in lp.longitudes().iter().enumerate() {
            assert_eq!(
                l.exponent_sum(j as u32 + 1),
                0,
                "{name} component {}",
                j + 1
            );
        }
    }
}

#[test]
fn borromean_rings() {
    let (lp, t) = load("borromean");
    assert!(linking_numbers(&lp)
        .unwrap()
        .iter()
        .flatten()
        .all(|&x| x == 0));
    let v = t.mubar(&[1, 2, 3]).unwrap();
    assert_eq!(v.abs(), 1);
    assert_eq!(t.mubar(&[2, 3, 1]), Some(v));
    assert_eq!(t.mubar(&[3, 1, 2]), Some(v));
    assert_eq!(t.mubar(&[1, 3, 2]), Some(-v));
    assert!(check_symmetries(&t).is_clean());
}

#[test]
fn whitehead_link() {
    let (lp, t) = load("whitehead");
    assert_eq!(linking_numbers(&lp).unwrap(), vec![vec![0, 0], vec![0, 0]]);
    for (idx, e) in t.entries() {
        if idx.len() <= 3 {
            assert_eq!(e.mubar, 0, "{idx}");
        }
    }
    assert_eq!(t.mubar(&[1, 1, 2, 2]), Some(1));
    assert_eq!(t.mubar(&[1, 2, 1, 2]), Some(-2));
    assert!(check_symmetries(&t).is_clean());
}

#[test]
fn whitehead_cover_ranks() {
    let (_, t) = load("whitehead");
    for l in [2, 3, 5] {
        let r = cover_homology_ranks(&t, l, 4).unwrap();
        assert_eq!(r.e, vec![1, 1, 1, 0], "l = {l}");
        assert_eq!(r.structure.exponents, vec![3]);
    }
    assert_eq!(
        cover_homology_ranks(&t, 2, 4)
            .unwrap()
            .structure
            .to_string(),
        "Z/8"
    );
}

#[test]
fn borromean_t_matrix() {
    let (_, t) = load("borromean");
    let m = t_l_matrix(&t, 2, 3).unwrap();
    assert_eq!(
        m.to_residues().unwrap(),
        vec![vec![0, 4, 4], vec![4, 0, 4], vec![4, 4, 0]]
    );
}

#[test]
fn nilpotent_representations_kill_relators() {
    for (name, _) in DIAGRAMS {
        let (lp, t) = load(name);
        if lp.n() < 2 {
            continue;
        }
        for len in 2..=4 {
            for idx in MultiIndex::all_of_length(lp.n(), len) {
                let rep =
                    nilpotent_rep(&lp, &idx, &t).unwrap_or_else(|e| panic!("{name} {idx}: {e}"));
                assert!(rep.corner_matches_mubar, "{name} {idx}");
            }
        }
    }
    let (lp, t) = load("borromean");
    let rep = nilpotent_rep(&lp, &MultiIndex::new(vec![1, 2, 3]), &t).unwrap();
    assert_eq!(rep.corner.abs(), 1);
    assert!(rep.off_corner_zero);
}

#[test]
fn json_inputs() {
    let hopf = LinkInput::from_json(include_str!("../data/hopf.json"))
        .unwrap()
        .load(3)
        .unwrap();
    assert_eq!(
        linking_numbers(&hopf.presentation).unwrap(),
        vec![vec![0, 1], vec![1, 0]]
    );
    let words = LinkInput::from_json(r#"{ "n": 2, "longitudes": ["x2", "x1"] }"#)
        .unwrap()
        .load(3)
        .unwrap();
    assert!(words.wirtinger.is_none());
    assert_eq!(
        linking_numbers(&words.presentation).unwrap(),
        vec![vec![0, 1], vec![1, 0]]
    );
    assert!(LinkInput::from_json(r#"{ "n": 3, "longitudes": ["x2"] }"#)
        .unwrap()
        .load(3)
        .is_err());
    assert!(LinkInput::from_json("[1, 2]").is_err());
}

#[test]
fn pd_round_trip_and_mirror() {
    for (name, text) in DIAGRAMS {
        let pd = PDCode::parse(text).unwrap();
        assert_eq!(PDCode::parse(&pd.to_text()).unwrap(), pd, "{name}");
        let (lp, _) = load(name);
        let mirrored = wirtinger_longitudes(&pd_to_wirtinger(&pd.mirror()).unwrap(), 4).unwrap();
        let lk = linking_numbers(&lp).unwrap();
        let lk_m = linking_numbers(&mirrored).unwrap();
        for (a, b) in lk.iter().flatten().zip(lk_m.iter().flatten()) {
            assert_eq!(*a, -*b, "{name}");
        }
    }
}
