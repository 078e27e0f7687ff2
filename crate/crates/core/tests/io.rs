mod common;

use common::*;
use crnf::io::*;
use crnf::moser::extended_moser;
use crnf::random::{random_manifold, Profile};
use crnf::CrnfError;

fn location(e: CrnfError) -> String {
    match e {
        CrnfError::Parse { location, .. } => location,
        e => panic!("expected a parse error, got {e}"),
    }
}

#[test]
fn manifold_round_trip_is_bit_exact() {
    for seed in 0..20 {
        let mut r = rng(seed);
        let n = 1 + (seed as usize % 3);
        let m = random_manifold_with(&mut r, n);
        let text = to_json(&manifold_document(&m));
        let back = parse_manifold_json(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(to_json(&manifold_document(&back)), text);
    }
}

fn random_manifold_with(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> crnf::moser::Manifold {
    common::random_manifold(r, n, if n == 3 { 5 } else { 6 }, 0.4)
}

#[test]
fn map_round_trip() {
    for seed in 0..10 {
        let mut r = rng(100 + seed);
        let map = random_map(&mut r, 2, 6, 7, 0.4);
        let text = to_json(&map_document(&map));
        let back = parse_map_json(&text).unwrap();
        assert_eq!(back, map);
        assert_eq!(to_json(&map_document(&back)), text);
    }
}

#[test]
fn moser_map_survives_serialization() {
    let mut r = rng(7);
    let m = common::random_manifold(&mut r, 2, 6, 0.4);
    let res = extended_moser(&m);
    let back = parse_map_json(&to_json(&map_document(&res.map))).unwrap();
    assert_eq!(crnf::moser::push_forward(&m, &back), res.manifold);
}

#[test]
fn parse_errors_are_positional() {
    let mono = |re: &str| format!(r#"{{"dz":[3,0],"dzb":[0,0],"re":"{re}","im":"0"}}"#);
    let doc = |monos: String| format!(r#"{{"n_vars":2,"degree":5,"terms":[{{"m":3,"n":0,"monomials":[{monos}]}}]}}"#);

    assert_eq!(location(parse_manifold_json(&doc(mono("1/0"))).unwrap_err()), "terms[0].monomials[0].re");
    assert_eq!(location(parse_manifold_json(&doc(mono("x"))).unwrap_err()), "terms[0].monomials[0].re");
    let dup = format!("{},{}", mono("1"), mono("2"));
    assert_eq!(location(parse_manifold_json(&doc(dup)).unwrap_err()), "terms[0].monomials[1]");
    let wrong = r#"{"dz":[2,0],"dzb":[0,0],"re":"1","im":"0"}"#.to_string();
    assert_eq!(location(parse_manifold_json(&doc(wrong)).unwrap_err()), "terms[0].monomials[0]");
    let short = r#"{"dz":[3],"dzb":[0,0],"re":"1","im":"0"}"#.to_string();
    assert_eq!(location(parse_manifold_json(&doc(short)).unwrap_err()), "terms[0].monomials[0].dz");

    let low = r#"{"n_vars":1,"degree":5,"terms":[{"m":1,"n":1,"monomials":[]}]}"#;
    assert_eq!(location(parse_manifold_json(low).unwrap_err()), "terms[0]");
    let high = r#"{"n_vars":1,"degree":4,"terms":[{"m":5,"n":0,"monomials":[]}]}"#;
    assert_eq!(location(parse_manifold_json(high).unwrap_err()), "terms[0]");
    let typed = r#"{"n_vars":1,"degree":4,"terms":[{"m":"3","n":0,"monomials":[]}]}"#;
    assert_eq!(location(parse_manifold_json(typed).unwrap_err()), "terms[0].m");
    let unknown = r#"{"n_vars":1,"degree":4,"terms":[],"extra":1}"#;
    assert!(matches!(parse_manifold_json(unknown), Err(CrnfError::Parse { .. })));
    assert!(location(parse_manifold_json("{").unwrap_err()).starts_with("line 1"));
}

#[test]
fn random_documents() {
    let a = random_manifold(5, 2, 6, 3, Profile::Generic).unwrap();
    let b = random_manifold(5, 2, 6, 3, Profile::Generic).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, random_manifold(6, 2, 6, 3, Profile::Generic).unwrap());

    let p = random_manifold(1, 2, 7, 3, Profile::PureOnly).unwrap();
    assert!(p.terms.iter().all(|t| t.m == 0 || t.n == 0));
    assert!(p.terms.iter().all(|t| t.m + t.n >= 3));

    for seed in 0..5 {
        for profile in [Profile::PureOnly, Profile::Mixed, Profile::Generic] {
            let doc = random_manifold(seed, 2, 5, 3, profile).unwrap();
            assert!(doc.terms.iter().any(|t| (t.m, t.n) == (3, 0) && !t.monomials.is_empty()));
            let m = parse_manifold(&doc).unwrap();
            let inv = crnf::moser::moser_invariants(&extended_moser(&m).manifold);
            assert_eq!(inv.s, Some(3));
            assert!(inv.nondegenerate);
        }
    }
    let q = random_manifold(2, 1, 8, 4, Profile::PureOnly).unwrap();
    assert!(q.terms.iter().all(|t| t.m + t.n >= 4));
    assert!(random_manifold(0, 2, 2, 3, Profile::Generic).is_err());
}
