use sextic_lattice::demo;
use sextic_lattice::specialize::{
    certify, find_certified, marked_image, respects_marked_classes, vanishing_h1, vanishing_h1_exhaustive,
    ExtendedLatticeData, SearchBudget, SubcurveDecomposition, TargetKind,
};

#[test]
fn explicit_embedding_is_geometric() {
    let s = demo::sigma().unwrap();
    let f = s.flags;
    assert!(f.isometric, "isometric");
    assert!(f.h_preserving, "h");
    assert!(f.monoid_condition, "monoid");
    assert!(f.primitive, "primitive");
}

#[test]
fn explicit_embedding_marked_image() {
    let s = demo::sigma().unwrap();
    let (src, tgt) = (demo::source_extended().unwrap(), demo::target_extended().unwrap());
    assert!(respects_marked_classes(&s, &src, &tgt));
    let (k, mp, _) = marked_image(&s, &src, &tgt).unwrap();
    // σ(w′) = w + t₂ + e′₂
    assert_eq!(k, 0);
    let mut expect = vec![0i64; 17];
    expect[1] = 1;
    expect[11] = 1;
    assert_eq!(mp, expect);
    let w = SubcurveDecomposition::in_lattice(&tgt.base, &demo::W, &mp).unwrap();
    assert!(vanishing_h1(&w, TargetKind::Root).unwrap());
    assert_eq!(vanishing_h1_exhaustive(&w, TargetKind::Root, 1 << 20).unwrap(), Some(true));
    let mut s = s;
    certify(&mut s, &src, &tgt).unwrap();
    assert!(s.flags.certified());
}

#[test]
fn shifted_marking_rejected() {
    let s = demo::sigma().unwrap();
    let src = demo::source_extended().unwrap();
    // u is ι-invariant, so it cannot be marked
    assert!(ExtendedLatticeData::new(demo::target_lattice(3).unwrap(), demo::U.to_vec()).is_err());
    // marking w + 2t₂ instead of w: σ(w′) = (w + 2t₂) − t₂ + e′₂ leaves the cone
    let tgt = demo::target_lattice(3).unwrap();
    let gram = tgt.ade().gram_rows();
    let mut v = demo::W.to_vec();
    for i in 0..17 {
        v[i] += 2 * gram[i][1];
    }
    let shifted = ExtendedLatticeData::new(tgt, v).unwrap();
    assert!(!respects_marked_classes(&s, &src, &shifted));
}

#[test]
fn search_rediscovers_certified_embedding() {
    let (src, tgt) = (demo::source_extended().unwrap(), demo::target_extended().unwrap());
    let (found, _, _) = find_certified(&src, &tgt, SearchBudget::default()).unwrap();
    let e = found.expect("certified embedding");
    assert!(e.flags.certified());
}
