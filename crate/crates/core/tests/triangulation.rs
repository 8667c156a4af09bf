mod common;

use ebloch::triangulation::{parse_triangulation, NormalPath, PathStep};
use ebloch::Error;
use serde_json::json;

use common::{figure8, figure8_unordered, fixture_text};

#[test]
fn figure_eight_parses() {
    let t = figure8_unordered();
    assert_eq!(t.len(), 2);
    let glued_faces: usize = t.tetrahedra.iter().map(|tet| tet.gluings.len()).sum();
    assert_eq!(glued_faces / 2, 4);
    assert_eq!(t.cusp_paths.as_ref().map(Vec::len), Some(2));
}

#[test]
fn figure_eight_edge_classes() {
    for t in [figure8_unordered(), figure8()] {
        let classes = t.edge_classes();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.valence() == 6));
        let total: usize = classes.iter().map(|c| c.valence()).sum();
        assert_eq!(total, 6 * t.len());
        assert_eq!(classes.len(), t.len());
    }
}

#[test]
fn figure_eight_edge_class_members() {
    let t = figure8_unordered();
    let mut classes: Vec<Vec<(usize, (usize, usize))>> = t
        .edge_classes()
        .iter()
        .map(|c| {
            let mut v: Vec<_> = c.incidences.iter().map(|i| (i.tet, i.sorted())).collect();
            v.sort();
            v
        })
        .collect();
    classes.sort();
    assert_eq!(
        classes,
        vec![
            vec![(0, (0, 1)), (0, (0, 3)), (0, (2, 3)), (1, (0, 1)), (1, (1, 2)), (1, (2, 3))],
            vec![(0, (0, 2)), (0, (1, 2)), (0, (1, 3)), (1, (0, 2)), (1, (0, 3)), (1, (1, 3))],
        ]
    );
}

#[test]
fn figure_eight_single_torus_cusp() {
    for t in [figure8_unordered(), figure8()] {
        let vertices = t.vertex_classes();
        assert_eq!(vertices.len(), 1);
        assert_eq!(vertices[0].corners.len(), 8);
        assert_eq!(vertices[0].link_euler_characteristic, 0);
    }
}

#[test]
fn orientation_signs_of_fixtures() {
    assert_eq!(figure8_unordered().orientation_signs().unwrap(), vec![1, 1]);
    assert_eq!(figure8().orientation_signs().unwrap(), vec![1, -1]);
}

#[test]
fn order_preservation_of_fixtures() {
    assert!(figure8().is_order_preserving());
    assert!(!figure8_unordered().is_order_preserving());
}

#[test]
fn sign_assignment_unique_up_to_flip() {
    // propagation from the other tetrahedron yields the same signs after a global flip
    let t = figure8();
    let relabeled = t.relabeled(&[1, 0]).unwrap();
    let a = t.orientation_signs().unwrap();
    let b = relabeled.orientation_signs().unwrap();
    assert_eq!(a[0] * a[1], b[0] * b[1]);
    assert_eq!(a[0], -b[1]);
}

fn document(gluings: serde_json::Value) -> String {
    json!({ "name": "test", "tetrahedra": gluings }).to_string()
}

#[test]
fn rejects_face_glued_to_itself() {
    let doc = document(json!([
        { "gluings": [
            { "tet": 0, "perm": [0, 1, 2, 3] },
            { "tet": 0, "perm": [0, 1, 2, 3] },
            { "tet": 0, "perm": [0, 1, 2, 3] },
            { "tet": 0, "perm": [0, 1, 2, 3] }
        ]}
    ]));
    assert!(matches!(parse_triangulation(&doc), Err(Error::Triangulation(_))));
}

#[test]
fn rejects_non_inverse_permutations() {
    let mut v: serde_json::Value = serde_json::from_str(&fixture_text("figure8_unordered.json")).unwrap();
    // tet 1 face 1 should carry the inverse of [1, 0, 2, 3]; break it
    v["tetrahedra"][1]["gluings"][1]["perm"] = json!([1, 0, 3, 2]);
    let err = parse_triangulation(&v.to_string()).unwrap_err();
    assert!(matches!(err, Error::Triangulation(_)), "{err}");
}

#[test]
fn rejects_malformed_documents() {
    assert!(matches!(parse_triangulation("{"), Err(Error::Parse(_))));
    let mut v: serde_json::Value = serde_json::from_str(&fixture_text("figure8_unordered.json")).unwrap();
    v["extra"] = json!(1);
    assert!(matches!(parse_triangulation(&v.to_string()), Err(Error::Parse(_))));
    let mut v: serde_json::Value = serde_json::from_str(&fixture_text("figure8_unordered.json")).unwrap();
    v["tetrahedra"][0]["gluings"][0]["tet"] = json!(7);
    assert!(matches!(parse_triangulation(&v.to_string()), Err(Error::Triangulation(_))));
    let mut v: serde_json::Value = serde_json::from_str(&fixture_text("figure8_unordered.json")).unwrap();
    v["tetrahedra"][0]["gluings"][0]["perm"] = json!([1, 1, 2, 3]);
    assert!(matches!(parse_triangulation(&v.to_string()), Err(Error::Triangulation(_))));
}

#[test]
fn rejects_orientation_reversing_gluing() {
    // swap one odd face gluing of the fixture for an even one carrying the same faces
    let mut v: serde_json::Value = serde_json::from_str(&fixture_text("figure8_unordered.json")).unwrap();
    v["tetrahedra"][0]["gluings"][3]["perm"] = json!([1, 0, 3, 2]);
    v["tetrahedra"][1]["gluings"][2]["perm"] = json!([1, 0, 3, 2]);
    let err = parse_triangulation(&v.to_string()).unwrap_err();
    assert!(err.to_string().contains("not orientable"), "{err}");
}

#[test]
fn edge_loops_circle_their_edge() {
    for t in [figure8_unordered(), figure8()] {
        let map = t.edge_class_map();
        for (c, class) in t.edge_classes().iter().enumerate() {
            let path = t.edge_loop(class);
            assert_eq!(path.len(), class.valence());
            let passes = t.path_passes(&path, None).unwrap();
            for p in &passes {
                assert_eq!(map[p.tet][ebloch::triangulation::edge_index(p.edge.0, p.edge.1)], c);
            }
            let first = passes[0].sense;
            assert!(passes.iter().all(|p| p.sense == first), "{passes:?}");
            // closed: the last exit face is glued to the first entry face
            let last = path.steps.last().unwrap();
            let g = t.gluing(last.tet, last.exit_face);
            assert_eq!((g.tet, g.perm[last.exit_face]), (path.steps[0].tet, path.steps[0].enter_face));
        }
    }
}

#[test]
fn reversed_paths_negate_senses() {
    let t = figure8_unordered();
    let mut paths: Vec<NormalPath> = t.cusp_paths.clone().unwrap();
    paths.extend(t.edge_classes().iter().map(|c| t.edge_loop(c)));
    for path in paths {
        let fwd = t.path_passes(&path, None).unwrap();
        let start = fwd.last().unwrap().near;
        let rev = t.path_passes(&path.reversed(), Some(start)).unwrap();
        let fwd_senses: Vec<i64> = fwd.iter().rev().map(|p| -p.sense).collect();
        let rev_senses: Vec<i64> = rev.iter().map(|p| p.sense).collect();
        assert_eq!(fwd_senses, rev_senses);
    }
}

#[test]
fn cusp_meridian_passes() {
    let t = figure8_unordered();
    let path = &t.cusp_paths.as_ref().unwrap()[0];
    let passes = t.path_passes(path, None).unwrap();
    let edges: Vec<(usize, (usize, usize), i64)> =
        passes.iter().map(|p| (p.tet, p.edge, p.sense)).collect();
    assert_eq!(edges, vec![(0, (0, 2), 1), (1, (0, 1), -1)]);
}

#[test]
fn path_steps_must_link() {
    let t = figure8_unordered();
    let bad = NormalPath::new(vec![
        PathStep { tet: 0, enter_face: 1, exit_face: 3 },
        PathStep { tet: 1, enter_face: 0, exit_face: 3 },
    ]);
    assert!(t.path_passes(&bad, None).is_err());
}

#[test]
fn even_count_of_double_prime_edges_on_order_compatible_paths() {
    // holds when every gluing preserves vertex order
    for t in [figure8()] {
        let mut paths: Vec<NormalPath> = t.cusp_paths.clone().unwrap();
        paths.extend(t.edge_classes().iter().map(|c| t.edge_loop(c)));
        for path in paths {
            let passes = t.path_passes(&path, None).unwrap();
            let count = passes.iter().filter(|p| p.edge_type == 2).count();
            assert_eq!(count % 2, 0, "{} {:?}", t.name, passes);
        }
    }
}

#[test]
fn relabeling_round_trips() {
    let t = figure8_unordered();
    let r = t.relabeled(&[1, 0]).unwrap();
    assert_eq!(r.relabeled(&[1, 0]).unwrap(), t);
    assert!(t.relabeled(&[0, 0]).is_err());
    let json = serde_json::to_string(&r).unwrap();
    assert_eq!(parse_triangulation(&json).unwrap(), r);
}
