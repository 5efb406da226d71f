use crate::model::path::{PathTemplate, Segment};
use crate::model::{Diagnostic, EndpointDef, HttpMethod, ParamDef, ParamKind, SourceLoc};

use super::scanner::{AnnotationSite, ClassDecl, MethodDecl};
use super::FrontendConfig;

/// Map a method-level annotation to its HTTP verb, when it is one of the
/// enabled endpoint annotations. `RequestMapping` only counts with an
/// explicit method attribute; JAX-RS verb annotations need a path from a
/// `Path` annotation on the method or class.
fn endpoint_verb(site: &AnnotationSite, config: &FrontendConfig) -> Option<HttpMethod> {
    if !config.endpoint_annotations.iter().any(|a| a == &site.name) {
        return None;
    }
    let verb = match site.name.as_str() {
        "GetMapping" | "GET" => HttpMethod::Get,
        "PostMapping" | "POST" => HttpMethod::Post,
        "PutMapping" | "PUT" => HttpMethod::Put,
        "DeleteMapping" | "DELETE" => HttpMethod::Delete,
        "PatchMapping" | "PATCH" => HttpMethod::Patch,
        "RequestMapping" => {
            let attr = site.args.get("method")?;
            let verb = attr.rsplit('.').next().unwrap_or(attr).trim();
            let method = HttpMethod::from_verb(verb);
            if !method.is_standard() {
                return None;
            }
            method
        }
        _ => return None,
    };
    Some(verb)
}

fn class_base_path(class: &ClassDecl) -> Option<String> {
    class
        .annotations
        .iter()
        .filter(|a| a.name == "RequestMapping" || a.name == "Path")
        .find_map(|a| a.path_arg())
}

fn method_path(method: &MethodDecl, verb_site: &AnnotationSite) -> Option<String> {
    if let Some(path) = verb_site.path_arg() {
        return Some(path);
    }
    // JAX-RS verbs carry no path themselves; a sibling Path annotation does.
    method.annotations.iter().find(|a| a.name == "Path").and_then(|a| a.path_arg())
}

fn join_paths(class_path: Option<&str>, method_path: Option<&str>) -> String {
    let mut joined = String::new();
    for piece in [class_path, method_path].into_iter().flatten() {
        if !piece.is_empty() && !piece.starts_with('/') {
            joined.push('/');
        }
        joined.push_str(piece);
    }
    joined
}

fn param_kind(site: &AnnotationSite) -> Option<ParamKind> {
    match site.name.as_str() {
        "PathVariable" | "PathParam" => Some(ParamKind::Path),
        "RequestParam" | "QueryParam" => Some(ParamKind::Query),
        "RequestBody" => Some(ParamKind::Body),
        _ => None,
    }
}

/// Build the parameter list for an endpoint method. The binding name is the
/// annotation's value argument when present, else the declared name.
fn endpoint_params(method: &MethodDecl) -> Vec<ParamDef> {
    let mut params = Vec::new();
    for p in &method.params {
        let Some((site, kind)) =
            p.annotations.iter().find_map(|a| param_kind(a).map(|k| (a, k)))
        else {
            continue;
        };
        let name = site
            .string_arg("value")
            .or_else(|| site.string_arg("name"))
            .or_else(|| site.string_arg(""))
            .unwrap_or_else(|| p.name.clone());
        params.push(ParamDef { name, declared_type: p.type_name.clone(), kind });
    }
    params
}

/// Rewrite path placeholders to their declared types and reconcile the
/// placeholder list with the path params: by name first, by position for
/// the rest, synthesizing or demoting so the two always correspond.
fn bind_path_params(
    path: &mut PathTemplate,
    params: &mut Vec<ParamDef>,
    warnings: &mut Vec<Diagnostic>,
    loc: &SourceLoc,
) {
    let placeholder_tags: Vec<String> = path
        .segments()
        .iter()
        .filter_map(|s| match s {
            Segment::Variable(tag) => Some(tag.clone()),
            Segment::Literal(_) => None,
        })
        .collect();

    let mut used = vec![false; params.len()];
    let mut bound_types: Vec<Option<String>> = vec![None; placeholder_tags.len()];
    for (i, tag) in placeholder_tags.iter().enumerate() {
        if let Some(j) = params
            .iter()
            .enumerate()
            .position(|(j, p)| !used[j] && p.kind == ParamKind::Path && &p.name == tag)
        {
            used[j] = true;
            bound_types[i] = Some(params[j].declared_type.clone());
        }
    }
    // Remaining placeholders take the unmatched path params in order.
    for slot in bound_types.iter_mut().filter(|s| s.is_none()) {
        if let Some(j) = (0..params.len()).find(|&j| !used[j] && params[j].kind == ParamKind::Path)
        {
            used[j] = true;
            *slot = Some(params[j].declared_type.clone());
        }
    }

    for (i, slot) in bound_types.iter().enumerate() {
        match slot {
            Some(ty) => path.retag_variable(i, ty),
            None => {
                // Placeholder without a declared param: bind it loosely.
                path.retag_variable(i, "unknown");
                params.push(ParamDef {
                    name: placeholder_tags[i].clone(),
                    declared_type: "unknown".into(),
                    kind: ParamKind::Path,
                });
                warnings.push(Diagnostic::warning(
                    "param-mismatch",
                    format!("path placeholder {:?} has no bound parameter", placeholder_tags[i]),
                    Some(loc.clone()),
                ));
            }
        }
    }
    // Leftover path params point at no placeholder; treat them as query to
    // keep the path contract intact.
    for (j, param) in params.iter_mut().enumerate() {
        if j < used.len() && !used[j] && param.kind == ParamKind::Path {
            param.kind = ParamKind::Query;
            warnings.push(Diagnostic::warning(
                "param-mismatch",
                format!("path parameter {:?} has no placeholder in the path", param.name),
                Some(loc.clone()),
            ));
        }
    }
}

/// Extract every endpoint a class exposes: a controller marker on the class
/// supplies the base path; each method-level endpoint annotation supplies
/// the verb and the rest of the path. Methods with endpoint annotations on
/// unmarked classes still count, with a warning.
pub fn extract_endpoints(
    classes: &[ClassDecl],
    service: &str,
    config: &FrontendConfig,
) -> (Vec<EndpointDef>, Vec<Diagnostic>) {
    let mut endpoints = Vec::new();
    let mut diagnostics = Vec::new();
    for class in classes {
        let marked = class
            .annotations
            .iter()
            .any(|a| config.controller_markers.iter().any(|m| m == &a.name));
        let base = class_base_path(class);
        let mut warned_orphan = false;
        for method in &class.methods {
            let Some((site, verb)) = method
                .annotations
                .iter()
                .find_map(|a| endpoint_verb(a, config).map(|v| (a, v)))
            else {
                continue;
            };
            if !marked && !warned_orphan {
                diagnostics.push(Diagnostic::warning(
                    "orphan-controller",
                    format!("class {} exposes endpoints without a controller marker", class.name),
                    Some(class.source_loc.clone()),
                ));
                warned_orphan = true;
            }
            let loc = SourceLoc { file: class.source_loc.file.clone(), line: method.line };
            let joined = join_paths(base.as_deref(), method_path(method, site).as_deref());
            let mut path = match PathTemplate::parse(&joined) {
                Ok(path) => path,
                Err(_) => {
                    diagnostics.push(Diagnostic::warning(
                        "invalid-endpoint-path",
                        format!("cannot normalize endpoint path {joined:?}"),
                        Some(loc),
                    ));
                    continue;
                }
            };
            let mut params = endpoint_params(method);
            bind_path_params(&mut path, &mut params, &mut diagnostics, &loc);
            let return_type = if method.return_type.is_empty() {
                "unknown".to_string()
            } else {
                method.return_type.clone()
            };
            endpoints.push(EndpointDef {
                service: service.to_string(),
                path,
                method: verb,
                params,
                return_type,
                source_loc: loc,
            });
        }
    }
    (endpoints, diagnostics)
}
