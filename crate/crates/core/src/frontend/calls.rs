use std::collections::BTreeMap;

use crate::model::{Diagnostic, HttpMethod, RestCall, SourceLoc, UrlPart};

use super::scanner::{lex, ClassDecl, MethodDecl, SpannedTok, Tok};
use super::FrontendConfig;

/// Names a local variable can resolve to: a folded string constant or a
/// declared type for hole tagging.
#[derive(Default)]
struct BodyContext {
    strings: BTreeMap<String, String>,
    types: BTreeMap<String, String>,
}

fn ident(tok: &SpannedTok) -> Option<&str> {
    match &tok.tok {
        Tok::Ident(name) => Some(name),
        _ => None,
    }
}

fn is_punct(tok: &SpannedTok, c: char) -> bool {
    matches!(tok.tok, Tok::Punct(p) if p == c)
}

/// Collect single-assignment `String x = <constant expr>;` locals and the
/// declared types of other locals. Reassigned names drop out of the string
/// map so only stable values fold into URLs.
fn body_context(toks: &[SpannedTok], constants: &BTreeMap<String, String>) -> BodyContext {
    let mut ctx = BodyContext::default();
    let mut assignments: BTreeMap<String, u32> = BTreeMap::new();
    for w in toks.windows(3) {
        if let (Some(name), true) = (ident(&w[0]), is_punct(&w[1], '=')) {
            if !is_punct(&w[2], '=') {
                *assignments.entry(name.to_string()).or_insert(0) += 1;
            }
        }
    }
    let mut i = 0;
    while i + 2 < toks.len() {
        // `Type name =` or `Type name ;` or `Type name :` declares a local.
        let decl = match (ident(&toks[i]), ident(&toks[i + 1]), &toks[i + 2].tok) {
            (Some(ty), Some(name), Tok::Punct('=' | ';' | ':')) => Some((ty, name)),
            _ => None,
        };
        // `List<Foo> name =` declares one too; take the ident before '<'.
        let generic_decl = if decl.is_none() && i > 0 && is_punct(&toks[i], '>') {
            match (ident(&toks[i + 1]), &toks[i + 2].tok) {
                (Some(name), Tok::Punct('=' | ';' | ':')) => {
                    let mut depth = 1;
                    let mut j = i;
                    while j > 0 && depth > 0 {
                        j -= 1;
                        if is_punct(&toks[j], '>') {
                            depth += 1;
                        } else if is_punct(&toks[j], '<') {
                            depth -= 1;
                        }
                    }
                    (depth == 0 && j > 0).then(|| ident(&toks[j - 1]).map(|ty| (ty, name))).flatten()
                }
                _ => None,
            }
        } else {
            None
        };
        if let Some((ty, name)) = decl.or(generic_decl) {
            ctx.types.entry(name.to_string()).or_insert_with(|| ty.to_string());
            if ty == "String"
                && is_punct(&toks[i + 2], '=')
                && assignments.get(name).copied().unwrap_or(0) <= 1
            {
                let end = toks[i + 3..]
                    .iter()
                    .position(|t| is_punct(t, ';'))
                    .map(|p| i + 3 + p)
                    .unwrap_or(toks.len());
                if let Some(value) = fold_constant(&toks[i + 3..end], constants, &ctx.strings) {
                    ctx.strings.insert(name.to_string(), value);
                }
            }
        }
        i += 1;
    }
    ctx
}

/// Fold `"a" + CONST + "b"` chains into one string when every term is a
/// literal or an already-known constant.
fn fold_constant(
    toks: &[SpannedTok],
    constants: &BTreeMap<String, String>,
    locals: &BTreeMap<String, String>,
) -> Option<String> {
    if toks.is_empty() {
        return None;
    }
    let mut out = String::new();
    let mut expect_term = true;
    for tok in toks {
        match (&tok.tok, expect_term) {
            (Tok::Str(s), true) => {
                out.push_str(s);
                expect_term = false;
            }
            (Tok::Ident(name), true) => {
                out.push_str(locals.get(name).or_else(|| constants.get(name))?);
                expect_term = false;
            }
            (Tok::Punct('+'), false) => expect_term = true,
            _ => return None,
        }
    }
    (!expect_term).then_some(out)
}

/// Split an argument token list on top-level commas.
fn split_args(toks: &[SpannedTok]) -> Vec<&[SpannedTok]> {
    let mut args = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, tok) in toks.iter().enumerate() {
        match tok.tok {
            Tok::Punct('(' | '[' | '{') => depth += 1,
            Tok::Punct(')' | ']' | '}') => depth -= 1,
            Tok::Punct(',') if depth == 0 => {
                args.push(&toks[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if start < toks.len() {
        args.push(&toks[start..]);
    }
    args
}

/// Turn the URL argument into literal and hole parts, folding constants and
/// tagging holes with the best known declared type.
fn url_parts(
    arg: &[SpannedTok],
    method: &MethodDecl,
    class: &ClassDecl,
    ctx: &BodyContext,
) -> Vec<UrlPart> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut chunks = Vec::new();
    for (i, tok) in arg.iter().enumerate() {
        match tok.tok {
            Tok::Punct('(' | '[' | '{') => depth += 1,
            Tok::Punct(')' | ']' | '}') => depth -= 1,
            Tok::Punct('+') if depth == 0 => {
                chunks.push(&arg[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    chunks.push(&arg[start..]);
    for chunk in chunks {
        match chunk {
            [one] => match &one.tok {
                Tok::Str(s) => parts.push(UrlPart::lit(s)),
                Tok::Ident(name) => {
                    if let Some(value) = ctx.strings.get(name).or_else(|| class.constants.get(name))
                    {
                        parts.push(UrlPart::lit(value));
                    } else {
                        parts.push(UrlPart::hole(hole_type(name, method, class, ctx)));
                    }
                }
                Tok::Punct(_) => parts.push(UrlPart::hole("unknown")),
            },
            // `this.field` reads a field; anything else is opaque.
            [a, b, c] if ident(a) == Some("this") && is_punct(b, '.') => match ident(c) {
                Some(name) => parts.push(UrlPart::hole(hole_type(name, method, class, ctx))),
                None => parts.push(UrlPart::hole("unknown")),
            },
            _ => parts.push(UrlPart::hole("unknown")),
        }
    }
    // Adjacent literals merge so folded constants read as one piece.
    let mut merged: Vec<UrlPart> = Vec::new();
    for part in parts {
        match (merged.last_mut(), part) {
            (Some(UrlPart::Lit(prev)), UrlPart::Lit(next)) => prev.push_str(&next),
            (_, part) => merged.push(part),
        }
    }
    merged
}

fn hole_type(name: &str, method: &MethodDecl, class: &ClassDecl, ctx: &BodyContext) -> String {
    method
        .params
        .iter()
        .find(|p| p.name == name)
        .map(|p| p.type_name.clone())
        .or_else(|| ctx.types.get(name).cloned())
        .or_else(|| {
            class.fields.iter().find(|f| f.name == name).map(|f| f.type_name.clone())
        })
        .unwrap_or_else(|| "unknown".to_string())
}

/// Verb for a client method name. `exchange` reads it from the second
/// argument and reports whether it was a recognized `HttpMethod` constant.
fn client_verb(name: &str, args: &[&[SpannedTok]]) -> Option<(HttpMethod, bool)> {
    if name == "exchange" {
        if let Some(arg) = args.get(1) {
            if let [.., before, dot, last] = arg {
                if ident(before) == Some("HttpMethod") && is_punct(dot, '.') {
                    if let Some(verb) = ident(last) {
                        let method = HttpMethod::from_verb(verb);
                        if method.is_standard() {
                            return Some((method, true));
                        }
                    }
                }
            }
        }
        return Some((HttpMethod::Other("DYNAMIC".into()), false));
    }
    let verb = match name {
        n if n.starts_with("get") => HttpMethod::Get,
        n if n.starts_with("post") => HttpMethod::Post,
        n if n.starts_with("put") => HttpMethod::Put,
        n if n.starts_with("delete") => HttpMethod::Delete,
        n if n.starts_with("patch") => HttpMethod::Patch,
        _ => return None,
    };
    Some((verb, true))
}

fn expected_return_type(args: &[&[SpannedTok]]) -> String {
    for arg in args {
        for w in arg.windows(3) {
            if let (Some(ty), true, Some("class")) = (ident(&w[0]), is_punct(&w[1], '.'), ident(&w[2]))
            {
                return ty.to_string();
            }
        }
    }
    "unknown".to_string()
}

/// `put`/`delete` collide with collection APIs, so they only count when the
/// URL argument carries a path-shaped literal.
fn looks_like_url(parts: &[UrlPart], name: &str) -> bool {
    if !matches!(name, "put" | "delete") {
        return true;
    }
    parts.iter().any(|p| matches!(p, UrlPart::Lit(s) if s.contains('/')))
}

/// Scan every method body of a class for outbound REST client invocations.
pub fn extract_calls(
    classes: &[ClassDecl],
    service: &str,
    config: &FrontendConfig,
) -> (Vec<RestCall>, Vec<Diagnostic>) {
    let mut calls = Vec::new();
    let mut diagnostics = Vec::new();
    for class in classes {
        for method in &class.methods {
            if method.body.is_empty() {
                continue;
            }
            let toks = lex(&method.body);
            let ctx = body_context(&toks, &class.constants);
            let mut i = 0;
            while i + 2 < toks.len() {
                let hit = is_punct(&toks[i], '.')
                    && is_punct(&toks[i + 2], '(')
                    && ident(&toks[i + 1])
                        .is_some_and(|n| config.client_methods.iter().any(|m| m == n));
                if !hit {
                    i += 1;
                    continue;
                }
                let name = ident(&toks[i + 1]).unwrap().to_string();
                let line = method.body_line + toks[i + 1].line - 1;
                let loc = SourceLoc { file: class.source_loc.file.clone(), line };
                let mut depth = 1i32;
                let mut j = i + 3;
                while j < toks.len() && depth > 0 {
                    match toks[j].tok {
                        Tok::Punct('(' | '[' | '{') => depth += 1,
                        Tok::Punct(')' | ']' | '}') => depth -= 1,
                        _ => {}
                    }
                    j += 1;
                }
                let arg_toks = &toks[i + 3..j.saturating_sub(1).max(i + 3)];
                let args = split_args(arg_toks);
                // Step past the name so calls nested in arguments still scan.
                i += 3;
                if args.is_empty() {
                    continue;
                }
                let Some((verb, verb_known)) = client_verb(&name, &args) else {
                    diagnostics.push(Diagnostic::warning(
                        "unknown-client-verb",
                        format!("cannot derive an HTTP method for client call {name:?}"),
                        Some(loc),
                    ));
                    continue;
                };
                let parts = url_parts(args[0], method, class, &ctx);
                if parts.is_empty() || !looks_like_url(&parts, &name) {
                    continue;
                }
                let unresolvable = !verb_known || !parts.iter().any(|p| matches!(p, UrlPart::Lit(_)));
                calls.push(RestCall {
                    caller: service.to_string(),
                    url: parts,
                    method: verb,
                    arg_count: args.len() as u32,
                    expected_return_type: expected_return_type(&args),
                    source_loc: loc,
                    unresolvable,
                });
            }
        }
    }
    (calls, diagnostics)
}
