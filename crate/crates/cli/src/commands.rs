//! One function per subcommand; each returns a status and a JSON result block.

use std::sync::Arc;

use heisenrig::caps::Caps;
use heisenrig::character::{
    all_characters, certify_frobenius, character_orbit, max_orbit_rank_one, nondegeneracy, AdditiveCharacter, Pairing,
};
use heisenrig::defect::{defect_invariants, TensorIndex};
use heisenrig::filtration::{
    boundary_decomposition_check, gr_of_morphism, graded_pieces, induced_filtration, verify_filtration_theorem,
    FiltrationMode,
};
use heisenrig::heisenberg::HeisenbergGroup;
use heisenrig::homspace::{stone_von_neumann_verify, SvnConfig, SvnStatus};
use heisenrig::ring::{parse_ring_spec, FiniteRing};
use heisenrig::schrodinger::{induced_iso, verify_homomorphism, verify_weyl, Representation};
use serde_json::{json, Value};

use crate::args::{Command, ModeArg, RunArgs, TensorIndexArg};
use crate::input::{parse_character_tuple, parse_gens, parse_models, parse_pairing, parse_phase, resolve_character};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }

    fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

pub fn caps(args: &RunArgs) -> Caps {
    let mut caps = Caps::default();
    if let Some(v) = args.cap_elems {
        caps.elements = v;
    }
    if let Some(v) = args.cap_pairs {
        caps.exhaustive_group = v;
    }
    if let Some(v) = args.cap_degree {
        caps.degree = v;
    }
    if let Some(v) = args.cap_dim {
        caps.dimension = v;
    }
    caps
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report values serialize")
}

fn ring_of(args: &RunArgs) -> Result<Arc<FiniteRing>, CliError> {
    let err = |e: heisenrig::ring::RingError| CliError::Input(format!("ring {:?}: {e}", args.ring));
    let spec = parse_ring_spec(&args.ring).map_err(err)?;
    Ok(Arc::new(FiniteRing::build_with_cap(&spec, caps(args).elements).map_err(err)?))
}

fn character_json(ch: &AdditiveCharacter) -> Value {
    json!({ "exponents": ch.exponents(), "description": ch.describe(), "conductor": ch.conductor() })
}

fn pairing_json(ring: &FiniteRing, pairing: &Pairing) -> Value {
    let rows: Vec<Vec<String>> =
        pairing.matrix().iter().map(|r| r.iter().map(|&e| ring.format_elem(e)).collect()).collect();
    json!(rows)
}

fn group_of(args: &RunArgs, ring: &Arc<FiniteRing>) -> Result<(Pairing, Arc<HeisenbergGroup>), CliError> {
    let pairing = parse_pairing(ring, args.n, &args.pairing)?;
    let ch = resolve_character(ring, &args.character)?;
    let group = HeisenbergGroup::new(pairing.clone(), ch).map_err(|e| CliError::Input(e.to_string()))?;
    Ok((pairing, group))
}

pub fn config_json(args: &RunArgs, command: &Command) -> Value {
    let mut config = json!({
        "ring": args.ring,
        "n": args.n,
        "pairing": args.pairing,
        "char": args.character,
        "seed": args.seed,
        "caps": to_value(&caps(args)),
    });
    match command {
        Command::Svn => config["models"] = json!(args.models),
        Command::Defect { phase, tensor_index } => {
            config["phase"] = json!(phase);
            config["tensor_index"] = json!(match tensor_index {
                TensorIndexArg::AdditiveDegree => "additive-degree",
                TensorIndexArg::LiteralMin => "literal-min",
            });
        }
        Command::Filtration { gens, mode } => {
            config["gens"] = json!(gens);
            config["mode"] = json!(match mode {
                ModeArg::Cyclic => "cyclic",
                ModeArg::Full => "full-module",
            });
        }
        Command::Ring { elements } => config["elements"] = json!(elements),
        _ => {}
    }
    config
}

pub fn run_command(args: &RunArgs, command: &Command) -> Result<(Status, Value), CliError> {
    match command {
        Command::Ring { elements } => cmd_ring(args, *elements),
        Command::Frobenius => cmd_frobenius(args),
        Command::Group => cmd_group(args),
        Command::Svn => cmd_svn(args),
        Command::Defect { phase, tensor_index } => cmd_defect(args, phase, *tensor_index),
        Command::Filtration { gens, mode } => cmd_filtration(args, gens, *mode),
        Command::Orbit => cmd_orbit(args),
    }
}

fn cmd_ring(args: &RunArgs, elements: bool) -> Result<(Status, Value), CliError> {
    let ring = ring_of(args)?;
    ring.verify_axioms().map_err(|e| CliError::Input(e.to_string()))?;
    let basis: Vec<Value> = ring
        .additive_basis()
        .into_iter()
        .map(|(i, order)| json!({ "element": ring.format_elem(i), "order": order }))
        .collect();
    let mut result = json!({
        "spec": ring.spec().to_string(),
        "order": ring.size(),
        "exponent": ring.exponent(),
        "radices": ring.radices(),
        "additive_basis": basis,
        "axioms_verified": true,
    });
    if elements {
        result["elements"] = json!((0..ring.size()).map(|i| ring.format_elem(i)).collect::<Vec<_>>());
    }
    Ok((Status::Ok, result))
}

fn cmd_frobenius(args: &RunArgs) -> Result<(Status, Value), CliError> {
    let ring = ring_of(args)?;
    let cert = certify_frobenius(&ring);
    let result = json!({
        "frobenius": cert.frobenius,
        "characters_total": all_characters(&ring).len(),
        "generating_character": cert.generating.as_ref().map(character_json),
        "witnesses": to_value(&cert.witnesses),
    });
    Ok((Status::Ok, result))
}

fn cmd_group(args: &RunArgs) -> Result<(Status, Value), CliError> {
    let ring = ring_of(args)?;
    let (pairing, group) = group_of(args, &ring)?;
    let caps = caps(args);
    let axioms = group.verify_axioms(caps.elements, args.seed);
    let weyl = verify_weyl(&group, &caps);
    let hom = verify_homomorphism(&Representation::schrodinger(&group), &caps, args.seed);
    let nd = nondegeneracy(&pairing, group.character());
    let centre = group.centre(caps.elements).map_err(|e| CliError::Input(e.to_string()))?;
    let centre_is_mu = centre.iter().all(|g| g.x == 0 && g.y == 0) && centre.len() as u64 == group.central_order();
    let shown: Vec<String> = centre.iter().take(64).map(|g| group.format(g)).collect();
    let ok = axioms.passed() && weyl.passed() && hom.passed() && (centre_is_mu == nd.nondegenerate);
    let result = json!({
        "order": group.order(),
        "central_order": group.central_order(),
        "conductor": group.conductor(),
        "character": character_json(group.character()),
        "pairing": pairing_json(&ring, &pairing),
        "axioms": to_value(&axioms),
        "weyl": to_value(&weyl),
        "homomorphism": to_value(&hom),
        "nondegeneracy": to_value(&nd),
        "centre": { "size": centre.len(), "is_mu": centre_is_mu, "elements": shown },
        "conjugation_sign": group.conjugation_sign(),
    });
    Ok((Status::from_bool(ok), result))
}

fn cmd_svn(args: &RunArgs) -> Result<(Status, Value), CliError> {
    let ring = ring_of(args)?;
    let pairing = parse_pairing(&ring, args.n, &args.pairing)?;
    let config = SvnConfig {
        character: parse_character_tuple(&args.character)?,
        models: parse_models(&args.models, args.seed)?,
        caps: caps(args),
        seed: args.seed,
    };
    let report = stone_von_neumann_verify(&ring, &pairing, &config);
    let status = if report.status == SvnStatus::Pass { Status::Pass } else { Status::Fail };
    let mut result = to_value(&report);
    result["pairing"] = pairing_json(&ring, &pairing);
    Ok((status, result))
}

fn cmd_defect(args: &RunArgs, phase: &str, index: TensorIndexArg) -> Result<(Status, Value), CliError> {
    let ring = ring_of(args)?;
    let pairing = parse_pairing(&ring, args.n, &args.pairing)?;
    let phi = parse_phase(&pairing, phase)?;
    let index = match index {
        TensorIndexArg::AdditiveDegree => TensorIndex::AdditiveDegree,
        TensorIndexArg::LiteralMin => TensorIndex::LiteralMin,
    };
    let report = defect_invariants(&phi, index, caps(args).degree).map_err(|e| CliError::Input(e.to_string()))?;
    let mut result = to_value(&report);
    result["tensor_display"] = json!(report.tensor.iter().map(|&v| ring.format_elem(v)).collect::<Vec<_>>());
    result["values"] = json!(phi.values().iter().map(|&v| ring.format_elem(v)).collect::<Vec<_>>());
    Ok((Status::Ok, result))
}

fn cmd_filtration(args: &RunArgs, gens: &str, mode: ModeArg) -> Result<(Status, Value), CliError> {
    let ring = ring_of(args)?;
    let (_, group) = group_of(args, &ring)?;
    let caps = caps(args);
    let set = parse_gens(&group, gens)?;
    let mode = match mode {
        ModeArg::Cyclic => FiltrationMode::cyclic_delta0(set.field(), set.dim()),
        ModeArg::Full => FiltrationMode::FullModule,
    };
    let input_err = |e: heisenrig::filtration::FiltrationError| CliError::Input(e.to_string());
    let filt = induced_filtration(&set, mode.clone()).map_err(input_err)?;
    let cert = verify_filtration_theorem(&filt, &set, None).map_err(input_err)?;
    let pieces = graded_pieces(&filt);
    let graded: Vec<usize> = pieces.iter().map(|p| p.dim).collect();
    let total: usize = graded.iter().sum();

    // transport along induced_iso so that it is a filtered map by construction
    let iso = induced_iso(&group);
    let (pulled, pulled_mode) = set.pulled_back(&iso, &mode).map_err(input_err)?;
    let source = induced_filtration(&pulled, pulled_mode).map_err(input_err)?;
    let morphism = verify_filtration_theorem(&source, &pulled, Some((&iso, &filt))).map_err(input_err)?;
    let gr_maps = gr_of_morphism(&iso, &source, &filt).map_err(input_err)?;
    let gr_invertible: Vec<bool> = gr_maps.iter().map(|m| m.invertible).collect();

    let pi = Representation::schrodinger(&group);
    let boundary = (0..filt.len())
        .map(|k| boundary_decomposition_check(&pi, &filt, k, &caps).map(|b| to_value(&b)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(input_err)?;
    let closure = set.product_closure();
    let ok = cert.passed() && morphism.passed() && total == filt.top().dim() && gr_invertible.iter().all(|&b| b);
    let result = json!({
        "mode": filt.mode.name(),
        "operators": set.operators().len(),
        "top_degree": set.top_degree(),
        "dims": filt.dims(),
        "graded_dims": graded,
        "graded_sum_matches_top": total == filt.top().dim(),
        "full_module_degenerate": filt.mode == FiltrationMode::FullModule && filt.levels[0].is_full(),
        "product_closure": to_value(&closure),
        "theorem": {
            "nesting_ok": cert.nesting_ok(),
            "action_ok": cert.action_ok(),
            "action_checks": cert.action_checks,
            "action_violations": to_value(&cert.action_violations),
            "nesting_violations": cert.nesting_violations,
        },
        "induced_iso": {
            "morphism_ok": morphism.morphism_ok(),
            "morphism_violations": to_value(&morphism.morphism_violations),
            "graded_invertible": gr_invertible,
        },
        "boundary_decomposition": boundary,
    });
    Ok((Status::from_bool(ok), result))
}

fn cmd_orbit(args: &RunArgs) -> Result<(Status, Value), CliError> {
    let ring = ring_of(args)?;
    let pairing = parse_pairing(&ring, args.n, &args.pairing)?;
    let ch = resolve_character(&ring, &args.character)?;
    let orbit = character_orbit(&pairing, &ch);
    let nd = nondegeneracy(&pairing, &ch);
    let mut result = json!({
        "character": character_json(&ch),
        "pairing": pairing_json(&ring, &pairing),
        "orbit": to_value(&orbit),
        "nondegeneracy": to_value(&nd),
    });
    if args.n == 1 {
        result["max_orbit_rank_one"] = to_value(&max_orbit_rank_one(&ring));
    }
    Ok((Status::Ok, result))
}
