//! Acceptance gate: prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use stringqi::constants::*;
use stringqi::encase::{cage_check, cage_check_exhaustive, encase_final, Facial};
use stringqi::harness::{self, Generated, Instance, InstanceSpec};
use stringqi::metricgraph::{metric_distortion_check, metric_pipeline, metric_to_string, Len, MetricPlanarGraph};
use stringqi::outerstring::{outerplanar_impression, outerstring_impression, outerstring_induct, outerstring_refine};
use stringqi::planarize::{planarize_full, string_induct, Planarized};
use stringqi::plane::{Dist, DistMatrix, PlaneMap};
use stringqi::rig;

type Outcome = Result<String, String>;

fn regions_of(spec: &InstanceSpec) -> Instance {
    match harness::generate(spec).expect("generator") {
        Generated::Regions(i) => i,
        Generated::Metric(_) => panic!("{} is a metric instance", spec.name()),
    }
}

fn metric_of(spec: &InstanceSpec) -> MetricPlanarGraph {
    match harness::generate(spec).expect("generator") {
        Generated::Metric(m) => m,
        Generated::Regions(_) => panic!("{} is not a metric instance", spec.name()),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn audit_map(map: &PlaneMap) -> Result<(), String> {
    let mut seen = vec![0u8; map.dart_count()];
    for face in map.faces() {
        for &d in face {
            seen[d.index()] += 1;
            ensure(d.rev().rev() == d && d.rev() != d, || format!("dart {} is not an involution pair", d.index()))?;
            ensure(map.origin(d.rev()) == map.target(d), || format!("dart {} endpoints disagree", d.index()))?;
        }
    }
    ensure(seen.iter().all(|&c| c == 1), || "faces do not partition the darts".into())?;
    for v in 0..map.vertex_count() as u32 {
        ensure(map.rotation(v).iter().all(|&d| map.origin(d) == v), || format!("rotation of {v} has a foreign dart"))?;
    }
    let rebuilt = PlaneMap::from_json(&map.to_json().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(rebuilt.face_count() == map.face_count(), || "Euler audit changed the face count".into())
}

struct StringRun {
    name: String,
    inst: Instance,
    out: Planarized,
    seconds: f64,
}

fn string_runs() -> Vec<StringRun> {
    harness::string_corpus()
        .iter()
        .map(|spec| {
            let inst = regions_of(spec);
            let t = Instant::now();
            let out = planarize_full(&inst.map, &inst.regions, true)
                .unwrap_or_else(|e| panic!("{}: {e}", spec.name()));
            StringRun { name: spec.name(), inst, out, seconds: t.elapsed().as_secs_f64() }
        })
        .collect()
}

fn criterion_1(runs: &[StringRun]) -> Outcome {
    ensure(runs.len() >= 100, || format!("corpus has {} instances", runs.len()))?;
    let strings = harness::string_corpus().iter().fold((0, 0), |acc, s| match *s {
        InstanceSpec::GridPolylines { strings, .. } => (acc.0.max(strings), acc.1),
        InstanceSpec::RandomTriangulationFamily { regions, .. } => (acc.0, acc.1.max(regions)),
        _ => acc,
    });
    ensure(strings == (150, 200), || format!("largest instances are {strings:?}"))?;
    let mut exp = rig::Q::from_integer(0);
    let mut con = rig::Q::from_integer(0);
    let mut slowest = 0f64;
    for r in runs {
        let rep = harness::oracle_distortion(&r.inst.string_graph(), &r.out.map.graph(), &r.out.bijection);
        if let Some((u, v, a, b)) = rep.violation {
            return Err(format!("{}: pair {u}, {v} has d_S = {a}, d_out = {b}", r.name));
        }
        exp = exp.max(rep.max_expansion);
        con = con.max(rep.max_contraction);
        slowest = slowest.max(r.seconds);
    }
    ensure(slowest < 60.0, || format!("slowest instance took {slowest:.1}s"))?;
    Ok(format!(
        "{} instances, every pair within [d_S/{LOWER_DIVISOR}, {UPPER_FACTOR}·d_S]; max expansion {exp}, max contraction {con}, slowest {slowest:.2}s",
        runs.len()
    ))
}

fn criterion_2() -> Outcome {
    let checks: [(&str, u64, u64); 13] = [
        ("outerstring x = 11·70", OUTERSTRING_X as u64, 770),
        ("encircling a = 3·70", ENCIRCLE_A as u64, 210),
        ("enforced a = 4·210", ENFORCED_A as u64, 840),
        ("encasing a = 11·840", ENCASE_A as u64, 9240),
        ("string x = 9240 + 2", STRING_X as u64, 9242),
        ("transfer x = 8·9242", TRANSFER_X as u64, 73936),
        ("x1 = 73936 + 8", QUASI_X1, 73944),
        ("x3 = 2·80", QUASI_X3, 160),
        ("upper factor = 160 + 2", UPPER_FACTOR, 162),
        ("cage chain = 7 + 8·9", CAGE_CHAIN as u64, 79),
        ("string y = 80", STRING_Y as u64, 80),
        ("lower divisor = 2·80·(73944 + 73936)", LOWER_DIVISOR, 23660800),
        ("metric divisor = 2·23660800", METRIC_LOWER_DIVISOR, 47321600),
    ];
    for (what, got, want) in checks {
        ensure(got == want, || format!("{what}: got {got}, want {want}"))?;
    }
    ensure(
        OUTERSTRING_X == OUTERPLANAR_X * OUTERSTRING_REFINED
            && ENCASE_A == OUTERPLANAR_X * ENFORCED_A
            && STRING_X == ENCASE_A + 2
            && TRANSFER_X == FORTIFY_K * STRING_X
            && CAGE_CHAIN == CAGE_D + (CAGE_D + 1) * ENCASE_B
            && CAGE_CHAIN <= STRING_Y
            && LOWER_DIVISOR == 2 * QUASI_X4 * (QUASI_X1 + QUASI_X2)
            && METRIC_LOWER_DIVISOR == 2 * LOWER_DIVISOR,
        || "derived constants do not follow their formulas".into(),
    )?;
    Ok(format!("{} identities hold; the cage chain 79 fits under the certified 80", checks.len()))
}

fn criterion_3() -> Outcome {
    let corpus = harness::outerplanar_corpus();
    let f_ell: BTreeSet<u32> =
        corpus.iter().filter_map(|s| if let InstanceSpec::FEll { ell } = s { Some(*ell) } else { None }).collect();
    ensure(corpus.len() >= 50, || format!("corpus has {} instances", corpus.len()))?;
    ensure(f_ell == (3..=50).collect(), || "F_ell is missing some ell in 3..=50".into())?;
    let mut worst = (Dist::ZERO, Dist::ZERO);
    for spec in &corpus {
        let inst = regions_of(spec);
        let (imp, _) = outerplanar_impression(&inst.map, &inst.regions).map_err(|e| format!("{}: {e}", spec.name()))?;
        let (x, y) = rig::verify_impression(&inst.map.graph(), &inst.regions, &imp.parts).map_err(|e| e.to_string())?;
        ensure(x <= Dist::Finite(OUTERPLANAR_X) && y <= Dist::Finite(OUTERPLANAR_Y), || {
            format!("{}: measured ({x}, {y})", spec.name())
        })?;
        worst = (worst.0.max(x), worst.1.max(y));
    }
    Ok(format!("{} instances, worst measured ({}, {}) against (11, 9)", corpus.len(), worst.0, worst.1))
}

fn criterion_4() -> Outcome {
    let corpus = harness::outerstring_corpus();
    let mut worst = [Dist::ZERO; 4];
    let mut steps = 0;
    let mut tags = BTreeSet::new();
    for spec in &corpus {
        let inst = regions_of(spec);
        let name = spec.name();
        let partial = outerstring_induct(&inst.map, &inst.regions, true).map_err(|e| format!("{name}: {e}"))?;
        let (refined, _) = outerstring_refine(&inst.map, &inst.regions, true).map_err(|e| format!("{name}: {e}"))?;
        let composed = outerstring_impression(&inst.map, &inst.regions, true).map_err(|e| format!("{name}: {e}"))?;
        let m = [partial.measured_x, refined.measured_x, composed.measured_x, composed.measured_y];
        let caps = [30, OUTERSTRING_REFINED, OUTERSTRING_X, OUTERPLANAR_Y];
        for k in 0..4 {
            ensure(m[k] <= Dist::Finite(caps[k]), || format!("{name}: measured {m:?} against {caps:?}"))?;
            worst[k] = worst[k].max(m[k]);
        }
        steps += partial.steps.len();
        tags.extend(partial.steps.iter().map(|s| format!("{:?}", s.tag)));
    }
    ensure(tags.len() == 5, || format!("only cases {tags:?} occurred"))?;
    Ok(format!(
        "{} instances, {steps} audited steps covering all 5 cases; worst partial {}, refined {}, composed ({}, {})",
        corpus.len(),
        worst[0],
        worst[1],
        worst[2],
        worst[3]
    ))
}

fn criterion_5() -> Outcome {
    let specs: Vec<InstanceSpec> = harness::string_corpus()
        .into_iter()
        .chain(harness::outerstring_corpus())
        .chain(harness::outerplanar_corpus())
        .collect();
    let caps = [ENCASE_A, ENCASE_B, SURROUND_C, CAGE_D];
    let mut worst = [Dist::ZERO; 4];
    let mut compared = 0;
    for spec in &specs {
        let inst = regions_of(spec);
        let name = spec.name();
        let enc = encase_final(&inst.map, &inst.regions, true).map_err(|e| format!("{name}: {e}"))?;
        for k in 0..4 {
            let m = enc.measured[k].ok_or_else(|| format!("{name}: bullet {k} unmeasured"))?;
            ensure(m <= Dist::Finite(caps[k]), || format!("{name}: bullet {k} measured {m}"))?;
            worst[k] = worst[k].max(m);
        }
        let certs = enc.cage_certs.as_ref().ok_or_else(|| format!("{name}: no cage certificates"))?;
        ensure(certs.len() == inst.regions.len(), || format!("{name}: {} certificates", certs.len()))?;
        if enc.parts.len() <= 8 {
            let g = inst.map.graph();
            let facial = Facial::new(&inst.map, &enc.parts).map_err(|e| e.to_string())?;
            let (canonical, _) = cage_check(&g, &facial, enc.parts.len(), &inst.regions);
            let exhaustive = cage_check_exhaustive(&g, &facial, enc.parts.len(), &inst.regions);
            ensure(canonical == exhaustive, || format!("{name}: canonical {canonical} vs exhaustive {exhaustive}"))?;
            compared += 1;
        }
    }
    ensure(compared > 0, || "no instance had at most 8 parts".into())?;
    Ok(format!(
        "{} instances, worst (a, b, c, d) = ({}, {}, {}, {}); canonical and exhaustive cages agree on {compared} instances with |B| <= 8",
        specs.len(),
        worst[0],
        worst[1],
        worst[2],
        worst[3]
    ))
}

fn criterion_6(runs: &[StringRun]) -> Outcome {
    for r in runs {
        let m = r.out.map.vertex_count();
        ensure(m == r.inst.regions.len(), || format!("{}: {m} output vertices for {} regions", r.name, r.inst.regions.len()))?;
        let distinct: BTreeSet<u32> = r.out.bijection.iter().copied().collect();
        ensure(distinct.len() == m && distinct.iter().all(|&w| (w as usize) < m), || format!("{}: not a bijection", r.name))?;
        audit_map(&r.out.map).map_err(|e| format!("{}: {e}", r.name))?;
        let text = harness::result_json(&r.inst.to_json().unwrap(), &r.out, None).map_err(|e| e.to_string())?;
        harness::verify_result(&text).map_err(|e| format!("{}: {e}", r.name))?;
    }
    Ok(format!("{} runs: inequalities asserted in every run, outputs bijective and planar", runs.len()))
}

fn criterion_7() -> Outcome {
    let corpus = harness::metric_corpus();
    ensure(corpus.len() >= 50, || format!("corpus has {} instances", corpus.len()))?;
    let mut misses = 0;
    for spec in &corpus {
        let h = metric_of(spec);
        let name = spec.name();
        let (s, _) = metric_to_string(&h).map_err(|e| format!("{name}: {e}"))?;
        metric_distortion_check(&h, &s).map_err(|e| format!("{name}: {e}"))?;
        let dh = h.all_distances().map_err(|e| e.to_string())?;
        let ds = DistMatrix::new(&s);
        let two = Len::from_integer(2);
        for (u, row) in dh.iter().enumerate() {
            for (v, &a) in row.iter().enumerate() {
                let b = ds.get(u as u32, v as u32);
                ensure(u == v || s.has_edge(u as u32, v as u32) == a.is_some_and(|a| a <= two), || {
                    format!("{name}: adjacency of {u}, {v} breaks the d <= 2 rule")
                })?;
                match (a, b) {
                    (Some(a), Dist::Finite(b)) => {
                        let b = Len::from_integer(b as u64);
                        ensure(a <= b * 2 && b <= a + 1, || format!("{name}: d_H = {a}, d_S = {b}"))?;
                    }
                    (None, Dist::Infinite) => {}
                    _ => return Err(format!("{name}: reachability of {u}, {v} differs")),
                }
            }
        }
        let (_, rep) = metric_pipeline(&h, true).map_err(|e| format!("{name}: {e}"))?;
        misses += rep.stated_upper_misses;
    }
    Ok(format!(
        "{} instances, d_H/2 <= d_S <= d_H + 1 and the d <= 2 rule hold exactly; end to end within [d_H/{METRIC_LOWER_DIVISOR}, {UPPER_FACTOR}·(d_H + 1)], {misses} pairs above {UPPER_FACTOR}·d_H + 1",
        corpus.len()
    ))
}

fn criterion_8() -> Outcome {
    let mut sides = 0;
    let corpus = harness::string_corpus();
    for spec in &corpus {
        let inst = regions_of(spec);
        let name = spec.name();
        let ind = string_induct(&inst.map, &inst.regions, true).map_err(|e| format!("{name}: {e}"))?;
        audit_map(&ind.map).map_err(|e| format!("{name}: {e}"))?;
        let faces: BTreeSet<u32> = ind.fortification.sides.iter().map(|&d| ind.map.face_of(d)).collect();
        ensure(faces.len() == ind.fortification.len(), || format!("{name}: two added edges share a side"))?;
        ensure(faces.iter().all(|&f| !ind.map.is_outer_face(f)), || format!("{name}: a side is the outer face"))?;
        sides += faces.len();
        let owner = rig::owners(ind.map.vertex_count(), &ind.parts).map_err(|e| format!("{name}: {e}"))?;
        ensure(owner.iter().all(|&o| o != u32::MAX), || format!("{name}: parts do not cover the host"))?;
    }
    Ok(format!(
        "{} audited runs; maps, {sides} fortification sides and part covers all pass",
        corpus.len()
    ))
}

fn criterion_9() -> Outcome {
    let mut compared = 0;
    for spec in harness::string_corpus().iter().step_by(4) {
        let a = regions_of(spec);
        let b = regions_of(spec);
        let (ta, tb) = (a.to_json().unwrap(), b.to_json().unwrap());
        ensure(ta == tb, || format!("{}: generator output differs", spec.name()))?;
        let ra = planarize_full(&a.map, &a.regions, true).map_err(|e| e.to_string())?;
        let rb = planarize_full(&b.map, &b.regions, true).map_err(|e| e.to_string())?;
        let (ja, jb) = (harness::result_json(&ta, &ra, None).unwrap(), harness::result_json(&tb, &rb, None).unwrap());
        ensure(ja == jb, || format!("{}: result JSON differs", spec.name()))?;
        compared += 1;
    }
    for spec in harness::metric_corpus().iter().step_by(5) {
        let h = metric_of(spec);
        let (ra, ma) = metric_pipeline(&h, true).map_err(|e| e.to_string())?;
        let (rb, mb) = metric_pipeline(&h, true).map_err(|e| e.to_string())?;
        let t = h.to_json().unwrap();
        ensure(
            harness::result_json(&t, &ra, Some(&ma)).unwrap() == harness::result_json(&t, &rb, Some(&mb)).unwrap(),
            || format!("{}: metric result JSON differs", spec.name()),
        )?;
        compared += 1;
    }
    Ok(format!("{compared} instance pairs byte-identical"))
}

fn main() {
    let runs = string_runs();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "end-to-end distortion", criterion_1(&runs)),
        (2, "constant chain", criterion_2()),
        (3, "outerplanar impressions", criterion_3()),
        (4, "outerstring induction", criterion_4()),
        (5, "encasing bullets", criterion_5()),
        (6, "impression map and quasi-bijection", criterion_6(&runs)),
        (7, "metric representation", criterion_7()),
        (8, "structural audits", criterion_8()),
        (9, "determinism", criterion_9()),
    ];
    let mut failed = 0;
    for (k, what, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {k} PASS {what}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {k} FAIL {what}: {detail}");
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
