use serde::de::DeserializeOwned;
use serde_json::json;

use plcover::cohomology::{
    cech_nerve, cohomology, kill_h1, kill_higher, principal_bundle_count, vertex_star_cover, Cochain, CochainDump,
    LocalSystem, Stalk,
};
use plcover::corpus;
use plcover::covering::{
    branched_completion, connected_covers, covering_from_coset_table, is_etale_covering_family,
    riemann_hurwitz_residual, verify_branched, verify_covering, BranchedCovering, CoveringDump, CoveringMap,
    MorphismCondition,
};
use plcover::etale::{as_etale_family, certificate_table, relative_cover_family, transverse_bound, FamilyDump};
use plcover::grouppi::{
    abelianization, edge_path_presentation, index_profile, low_index_subgroups, simplify, CosetTable, FiniteGroup,
    GroupSpec,
};
use plcover::io::FacetList;
use plcover::plstructure::{
    coskeleton, complement_c, is_disjoint_union_of_cycles, is_normal, link_of, link_summaries, regular_neighborhood,
    verify_any, verify_pseudomanifold, Mode,
};
use plcover::{Error, Result, SimplicialComplex};

use crate::report::{load_complex, read_input, InputDigest, Outcome};
use crate::{Command, ModeArg, SubArgs};

fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(format!("{what}: {e}")))
}

fn subcomplex(x: &SimplicialComplex, sub: &SubArgs, inputs: &mut Vec<InputDigest>) -> Result<Option<SimplicialComplex>> {
    if let Some(path) = &sub.sub {
        // keep the ids of the ambient complex; no reindexing here
        let f: FacetList = parse_json(&read_input("subcomplex", path, inputs)?, "subcomplex")?;
        return SimplicialComplex::from_vertex_lists(&f.facets).map(Some);
    }
    if let Some(i) = sub.skeleton {
        return x.skeleton(i).map(Some);
    }
    if let Some(vs) = &sub.vertices {
        if vs.is_empty() {
            return Err(Error::Empty("vertex list"));
        }
        return Ok(Some(corpus::vertex_set(vs)));
    }
    Ok(None)
}

fn required(x: &SimplicialComplex, sub: &SubArgs, inputs: &mut Vec<InputDigest>) -> Result<SimplicialComplex> {
    subcomplex(x, sub, inputs)?.ok_or_else(|| Error::Invalid("a subcomplex is required (--sub, --skeleton or --vertices)".into()))
}

fn summands(orders: &[u64]) -> String {
    if orders.is_empty() {
        "0".into()
    } else {
        orders.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
    }
}

fn covering_dump(f: &CoveringMap) -> CoveringDump {
    CoveringDump::from_branched(&BranchedCovering {
        map: f.map.clone(),
        branch: SimplicialComplex::empty(),
        degree: f.degree,
    })
}

pub fn run(cmd: &Command, inputs: &mut Vec<InputDigest>) -> Result<Outcome> {
    match cmd {
        Command::Verify { input, mode } => {
            let x = load_complex("complex", input, inputs)?;
            let report = match mode {
                ModeArg::Auto => verify_any(&x),
                ModeArg::Closed => verify_pseudomanifold(&x, Mode::Closed),
                ModeArg::Boundary => verify_pseudomanifold(&x, Mode::WithBoundary),
            };
            if !report.is_valid() {
                let summary = format!("not a pseudomanifold ({} violations)", report.violations.len());
                return Ok(Outcome::checked(json!({ "pseudomanifold": report }), summary, false));
            }
            let normality = is_normal(&x.barycentric_subdivision())?;
            let kind = if report.boundary.is_empty() { "closed" } else { "with-boundary" };
            let summary = format!(
                "{kind} pseudomanifold, {}",
                if normality.normal { "normal" } else { "not normal" }
            );
            Ok(Outcome::ok(json!({ "pseudomanifold": report, "normality": normality }), summary))
        }
        Command::Links { input } => {
            let x = load_complex("complex", input, inputs)?;
            let d = x.barycentric_subdivision();
            let links = link_summaries(&d)?;
            let mut failures = Vec::new();
            let mut codim2_cycles = true;
            for l in links.iter().filter(|l| l.codimension >= 2) {
                if !l.pseudomanifold {
                    failures.push(l.simplex.clone());
                }
                if l.codimension == 2 && !is_disjoint_union_of_cycles(&link_of(&d, &l.simplex)?) {
                    codim2_cycles = false;
                }
            }
            let passed = failures.is_empty() && codim2_cycles;
            let summary = format!(
                "{} links, {} of codimension >= 2 not pseudomanifolds, codimension-2 links {}",
                links.len(),
                failures.len(),
                if codim2_cycles { "are disjoint cycles" } else { "are not all disjoint cycles" }
            );
            let result = json!({ "links": links, "failures": failures, "codimension_2_cycles": codim2_cycles });
            Ok(Outcome::checked(result, summary, passed))
        }
        Command::Coskeleton { input, dim } => {
            let x = load_complex("complex", input, inputs)?;
            let c = coskeleton(&x.barycentric_subdivision(), *dim)?;
            let summary = format!("{dim}-coskeleton with f-vector {:?}", c.f_vector());
            Ok(Outcome::ok(json!({ "f_vector": c.f_vector(), "complex": c }), summary))
        }
        Command::Complement { input, sub } => {
            let x = load_complex("complex", input, inputs)?;
            let b = required(&x, sub, inputs)?;
            let c = complement_c(&x.barycentric_subdivision(), &b)?;
            let summary = format!("complement with f-vector {:?}", c.f_vector());
            Ok(Outcome::ok(json!({ "f_vector": c.f_vector(), "complex": c }), summary))
        }
        Command::Neighborhood { input, sub } => {
            let x = load_complex("complex", input, inputs)?;
            let b = required(&x, sub, inputs)?;
            let d = x.barycentric_subdivision();
            let rn = regular_neighborhood(&d, &b)?;
            let union_is_derived = rn.neighborhood.union(&rn.complement) == *d.complex();
            let boundary_rule = rn.boundary.is_empty() == (b == x);
            let summary = format!(
                "N {:?}, C {:?}, boundary {:?}",
                rn.neighborhood.f_vector(),
                rn.complement.f_vector(),
                rn.boundary.f_vector()
            );
            let result = json!({
                "neighborhood": rn,
                "union_is_derived_complex": union_is_derived,
                "boundary_empty_iff_everything": boundary_rule,
            });
            Ok(Outcome::checked(result, summary, union_is_derived && boundary_rule))
        }
        Command::Pi1 {
            input,
            abelianization: want_ab,
            max_index,
            budget,
        } => {
            let x = load_complex("complex", input, inputs)?;
            let base = *x.vertices().first().ok_or(Error::Empty("complex"))?;
            let pres = edge_path_presentation(&x, base)?;
            let simplified = simplify(&pres.presentation);
            let mut result = json!({
                "basepoint": base,
                "presentation": pres.presentation,
                "simplified": simplified.presentation,
            });
            let mut summary = format!(
                "{} generators, {} relators; simplified to {} and {}",
                pres.presentation.generator_count,
                pres.presentation.relators.len(),
                simplified.presentation.generator_count,
                simplified.presentation.relators.len()
            );
            if *want_ab {
                let ab = abelianization(&pres.presentation)?;
                summary += &format!("; abelianization rank {} torsion {:?}", ab.free_rank, ab.torsion);
                result["abelianization"] = json!(ab);
            }
            if let Some(k) = max_index {
                let tables = low_index_subgroups(&pres.presentation, *k, *budget)?;
                let profile = index_profile(&tables, *k);
                summary += &format!("; subgroup classes by index {profile:?}");
                result["low_index"] = json!({ "max_index": k, "profile": profile, "tables": tables });
            }
            Ok(Outcome::ok(result, summary))
        }
        Command::Cover {
            input,
            table,
            max_index,
            budget,
        } => {
            let x = load_complex("complex", input, inputs)?;
            let base = *x.vertices().first().ok_or(Error::Empty("complex"))?;
            let pres = edge_path_presentation(&x, base)?;
            let covers = match (table, max_index) {
                (Some(path), _) => {
                    let t: CosetTable = parse_json(&read_input("coset-table", path, inputs)?, "coset table")?;
                    let t = CosetTable::new(t.degree, t.action)?;
                    vec![covering_from_coset_table(&x, &pres, &t)?]
                }
                (None, Some(k)) => connected_covers(&x, &pres, *k, *budget)?,
                (None, None) => return Err(Error::Invalid("--table or --max-index is required".into())),
            };
            let mut passed = true;
            let entries: Vec<_> = covers
                .iter()
                .map(|f| {
                    let report = verify_covering(&f.map, f.degree);
                    passed &= report.valid;
                    json!({
                        "euler_characteristic": f.source().euler_characteristic(),
                        "report": report,
                        "dump": covering_dump(f),
                    })
                })
                .collect();
            let summary = format!("{} covering(s) built from monodromy", covers.len());
            Ok(Outcome::checked(json!({ "covers": entries }), summary, passed))
        }
        Command::BranchComplete {
            input,
            branch,
            degree,
            choice,
            budget,
        } => {
            let x = load_complex("complex", input, inputs)?;
            let v = required(&x, branch, inputs)?;
            let d = x.barycentric_subdivision();
            let c = complement_c(&d, &v)?;
            let base = *c.vertices().first().ok_or(Error::Empty("complement"))?;
            let pres = edge_path_presentation(&c, base)?;
            let covers = connected_covers(&c, &pres, *degree, *budget)?;
            let cover = covers.get(*choice).ok_or(Error::Range {
                what: "cover choice",
                value: *choice as i64,
                min: 0,
                max: covers.len() as i64 - 1,
            })?;
            let bc = branched_completion(&d, &v, cover)?;
            let report = verify_branched(&bc);
            let source = verify_any(bc.source());
            let residual = if x.dim() == Some(2) { Some(riemann_hurwitz_residual(&bc)?) } else { None };
            let passed = report.valid && source.is_valid() && residual.unwrap_or(0) == 0;
            let summary = format!(
                "degree {} branched cover, {} connected choices, total space chi {}, riemann-hurwitz residual {}",
                bc.degree,
                covers.len(),
                bc.source().euler_characteristic(),
                residual.map_or("n/a".into(), |r| r.to_string())
            );
            let result = json!({
                "available_covers": covers.len(),
                "report": report,
                "total_space_pseudomanifold": source.is_valid(),
                "riemann_hurwitz_residual": residual,
                "dump": CoveringDump::from_branched(&bc),
            });
            Ok(Outcome::checked(result, summary, passed))
        }
        Command::EtaleFamily {
            input,
            branch,
            members,
            seed,
        } => {
            let y = load_complex("complex", input, inputs)?;
            let b = subcomplex(&y, branch, inputs)?.unwrap_or_else(SimplicialComplex::empty);
            let fam = relative_cover_family(&y, &b, *members, *seed)?;
            let certificates = certificate_table(&fam)?;
            let transverse = certificates
                .iter()
                .all(|c| c.dimension <= transverse_bound(fam.dimension, c.members.len()));
            let (target, family) = as_etale_family(&fam);
            let etale = is_etale_covering_family(&target, &family, MorphismCondition::AsPrinted)?;
            let total = certificates.last().map_or(-1, |c| c.dimension);
            let summary = format!(
                "{} members, total intersection dimension {}, {}, {}",
                fam.members.len(),
                total,
                if transverse { "transverse" } else { "not transverse" },
                if etale.is_covering_family { "covering family" } else { "not a covering family" }
            );
            let result = json!({ "family": FamilyDump::new(&fam, certificates), "etale": etale, "transverse": transverse });
            Ok(Outcome::checked(result, summary, transverse))
        }
        Command::Cohomology {
            input,
            degree,
            coefficients,
        } => {
            let x = load_complex("complex", input, inputs)?;
            let stalk = Stalk::from_orders(coefficients.coefficients.clone())?;
            let h = cohomology(&x, &LocalSystem::constant(stalk.clone()), *degree)?;
            let summary = format!("H^{degree} = {}", summands(&h.invariant_factors));
            let reps: Vec<CochainDump> = h.representatives.iter().map(|c| c.dump(&stalk)).collect();
            let result = json!({
                "degree": degree,
                "stalk": stalk.orders(),
                "orders": h.orders,
                "invariant_factors": h.invariant_factors,
                "representatives": reps,
            });
            Ok(Outcome::ok(result, summary))
        }
        Command::Kill {
            input,
            degree,
            class,
            cochain,
            coefficients,
            branch,
            members,
            seed,
        } => {
            let y = load_complex("complex", input, inputs)?;
            let b = subcomplex(&y, branch, inputs)?.unwrap_or_else(SimplicialComplex::empty);
            let given = match cochain {
                Some(path) => Some(parse_json::<CochainDump>(&read_input("cochain", path, inputs)?, "cochain")?),
                None => None,
            };
            let stalk = Stalk::from_orders(match &given {
                Some(g) => g.stalk.clone(),
                None => coefficients.coefficients.clone(),
            })?;
            let sys = LocalSystem::constant(stalk.clone());
            let pick = |x: &SimplicialComplex| -> Result<Cochain> {
                if let Some(g) = &given {
                    if g.degree != *degree {
                        return Err(Error::Shape(format!("cochain has degree {}, expected {degree}", g.degree)));
                    }
                    return Cochain::from_dump(g, &stalk);
                }
                let h = cohomology(x, &sys, *degree)?;
                h.representatives.get(*class).cloned().ok_or(Error::Range {
                    what: "cohomology class",
                    value: *class as i64,
                    min: 0,
                    max: h.representatives.len() as i64 - 1,
                })
            };
            if *degree == 1 {
                let model = complement_c(&y.barycentric_subdivision(), &b)?;
                let t = pick(&model)?;
                let k = kill_h1(&y, &b, &stalk, &t)?;
                let summary = format!(
                    "class killed by a degree {} branched cover, witness {}",
                    k.completion.degree,
                    if k.verified { "verified" } else { "FAILED" }
                );
                let result = json!({
                    "class": t.dump(&stalk),
                    "images": k.images,
                    "cover_degree": k.completion.degree,
                    "completion": CoveringDump::from_branched(&k.completion),
                    "pulled_back": k.pulled_back.dump(&stalk),
                    "witness": k.witness.dump(&stalk),
                    "verified": k.verified,
                });
                return Ok(Outcome::checked(result, summary, k.verified));
            }
            let fam = relative_cover_family(&y, &b, *members, *seed)?;
            let t = pick(fam.ambient.base())?;
            let witnesses = kill_higher(&fam, &sys, &t)?;
            let passed = witnesses.iter().all(|w| w.verified);
            let summary = format!(
                "witnesses on {} members, {}",
                witnesses.len(),
                if passed { "all verified" } else { "verification FAILED" }
            );
            let entries: Vec<_> = witnesses
                .iter()
                .map(|w| json!({ "summary": w.summary(), "witness": w.witness.dump(&stalk) }))
                .collect();
            let result = json!({ "class": t.dump(&stalk), "members": entries });
            Ok(Outcome::checked(result, summary, passed))
        }
        Command::Nerve { input } => {
            let x = load_complex("complex", input, inputs)?;
            let nerve = cech_nerve(&x, &vertex_star_cover(&x))?;
            let summary = format!("nerve of the vertex-star cover with f-vector {:?}", nerve.f_vector());
            Ok(Outcome::ok(nerve.dump(), summary))
        }
        Command::DescentCount { input, group, budget } => {
            let x = load_complex("complex", input, inputs)?;
            let spec: GroupSpec = parse_json(&read_input("group", group, inputs)?, "group")?;
            let g = FiniteGroup::from_spec(&spec)?;
            let count = principal_bundle_count(&x, &g, *budget)?;
            let summary = format!(
                "{} homomorphisms, {} pointed descent classes, {} bundles up to isomorphism",
                count.hom_count, count.descent_count, count.isomorphism_classes
            );
            Ok(Outcome::ok(count, summary))
        }
    }
}
