//! Tolerant lexical scanning of annotation-based Java sources.
//!
//! The scanner recognizes annotation sites, top-level class declarations,
//! field and method shapes, and balanced braces. It is not a Java parser:
//! regions it cannot make sense of are skipped with a warning and scanning
//! continues at the next member boundary, so no input file can abort a run.

use std::collections::BTreeMap;

use crate::model::{Diagnostic, EntityField, SourceLoc};

/// An annotation occurrence with its raw arguments. The default (value)
/// argument is stored under the empty key; string literal arguments keep
/// their quotes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationSite {
    pub name: String,
    pub args: BTreeMap<String, String>,
    pub line: u32,
}

impl AnnotationSite {
    /// The first quoted string in the named argument (or the default one),
    /// unquoted.
    pub fn string_arg(&self, key: &str) -> Option<String> {
        let raw = self.args.get(key)?;
        first_quoted(raw)
    }

    /// The path-like argument: `value`, then `path`, then the default slot.
    pub fn path_arg(&self) -> Option<String> {
        self.string_arg("value")
            .or_else(|| self.string_arg("path"))
            .or_else(|| self.string_arg(""))
    }
}

fn first_quoted(raw: &str) -> Option<String> {
    let start = raw.find('"')?;
    let mut out = String::new();
    let mut chars = raw[start + 1..].chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => out.push(chars.next()?),
            '"' => return Some(out),
            c => out.push(c),
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamDecl {
    pub name: String,
    pub type_name: String,
    pub annotations: Vec<AnnotationSite>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodDecl {
    pub name: String,
    pub return_type: String,
    pub params: Vec<ParamDecl>,
    pub annotations: Vec<AnnotationSite>,
    /// Raw text between the method's braces, empty for abstract methods.
    pub body: String,
    /// Line where the body text begins.
    pub body_line: u32,
    pub line: u32,
}

/// One top-level class from one source file. Inner classes are skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub annotations: Vec<AnnotationSite>,
    pub fields: Vec<EntityField>,
    pub methods: Vec<MethodDecl>,
    /// Names of `static final String` fields with compile-time constant
    /// initializers, for same-file URL substitution.
    pub constants: BTreeMap<String, String>,
    pub source_loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    Punct(char),
}

#[derive(Debug, Clone)]
pub(crate) struct SpannedTok {
    pub(crate) tok: Tok,
    pub(crate) line: u32,
    /// Byte offset just past this token, for raw body slicing.
    end: usize,
}

/// Lex the file into identifiers, string literals and punctuation, dropping
/// comments and tracking lines. Malformed literals run to end of line.
pub(crate) fn lex(source: &str) -> Vec<SpannedTok> {
    let chars: Vec<(usize, char)> = source.char_indices().collect();
    let n = chars.len();
    let offset = |i: usize| if i < n { chars[i].0 } else { source.len() };
    let mut toks = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    while i < n {
        let (start, c) = chars[i];
        match c {
            '\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            '/' if matches!(chars.get(i + 1), Some((_, '/'))) => {
                while i < n && chars[i].1 != '\n' {
                    i += 1;
                }
            }
            '/' if matches!(chars.get(i + 1), Some((_, '*'))) => {
                i += 2;
                while i + 1 < n && !(chars[i].1 == '*' && chars[i + 1].1 == '/') {
                    if chars[i].1 == '\n' {
                        line += 1;
                    }
                    i += 1;
                }
                i = (i + 2).min(n);
            }
            '"' => {
                let mut value = String::new();
                i += 1;
                while i < n && chars[i].1 != '"' && chars[i].1 != '\n' {
                    if chars[i].1 == '\\' && i + 1 < n {
                        value.push(chars[i + 1].1);
                        i += 2;
                    } else {
                        value.push(chars[i].1);
                        i += 1;
                    }
                }
                if i < n && chars[i].1 == '"' {
                    i += 1;
                }
                toks.push(SpannedTok { tok: Tok::Str(value), line, end: offset(i) });
            }
            '\'' => {
                i += 1;
                while i < n && chars[i].1 != '\'' && chars[i].1 != '\n' {
                    if chars[i].1 == '\\' {
                        i += 1;
                    }
                    i += 1;
                }
                if i < n && chars[i].1 == '\'' {
                    i += 1;
                }
            }
            c if c.is_alphanumeric() || c == '_' || c == '$' => {
                while i < n {
                    let ch = chars[i].1;
                    if ch.is_alphanumeric() || ch == '_' || ch == '$' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                toks.push(SpannedTok {
                    tok: Tok::Ident(source[start..offset(i)].to_string()),
                    line,
                    end: offset(i),
                });
            }
            _ => {
                i += 1;
                toks.push(SpannedTok { tok: Tok::Punct(c), line, end: offset(i) });
            }
        }
    }
    toks
}

struct Parser<'a> {
    toks: &'a [SpannedTok],
    pos: usize,
    source: &'a str,
    file: &'a str,
    diagnostics: Vec<Diagnostic>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn line(&self) -> u32 {
        self.toks.get(self.pos).map(|t| t.line).unwrap_or(0)
    }

    fn bump(&mut self) -> Option<&SpannedTok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn at_punct(&self, c: char) -> bool {
        matches!(self.peek(), Some(Tok::Punct(p)) if *p == c)
    }

    fn at_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(w)) if w == word)
    }

    /// First token after any run of modifier keywords.
    fn after_modifiers(&self) -> Option<&Tok> {
        let mut i = self.pos;
        while let Some(t) = self.toks.get(i) {
            match &t.tok {
                Tok::Ident(w) if MODIFIERS.contains(&w.as_str()) => i += 1,
                tok => return Some(tok),
            }
        }
        None
    }

    fn at_inner_type(&self) -> bool {
        matches!(
            self.after_modifiers(),
            Some(Tok::Ident(w)) if matches!(w.as_str(), "class" | "interface" | "enum" | "record")
        )
    }

    fn at_initializer_block(&self) -> bool {
        matches!(self.after_modifiers(), Some(Tok::Punct('{')))
    }

    fn warn(&mut self, message: String, line: u32) {
        self.diagnostics.push(Diagnostic::warning(
            "skipped-region",
            message,
            Some(SourceLoc { file: self.file.to_string(), line }),
        ));
    }

    /// Skip a balanced group assuming the opener is the current token.
    fn skip_balanced(&mut self, open: char, close: char) {
        let mut depth = 0i32;
        while let Some(t) = self.bump() {
            match t.tok {
                Tok::Punct(c) if c == open => depth += 1,
                Tok::Punct(c) if c == close => {
                    depth -= 1;
                    if depth == 0 {
                        return;
                    }
                }
                _ => {}
            }
        }
    }

    /// Parse `@Name` or `@pkg.Name(args)`; the cursor sits on '@'.
    fn annotation(&mut self) -> Option<AnnotationSite> {
        let line = self.line();
        self.bump();
        let mut name = String::new();
        loop {
            match self.peek() {
                Some(Tok::Ident(word)) => {
                    name = word.clone();
                    self.bump();
                }
                _ => break,
            }
            if self.at_punct('.') {
                self.bump();
            } else {
                break;
            }
        }
        if name.is_empty() {
            return None;
        }
        let mut args = BTreeMap::new();
        if self.at_punct('(') {
            let group = self.collect_balanced('(', ')');
            parse_annotation_args(&group, &mut args);
        }
        Some(AnnotationSite { name, args, line })
    }

    /// Collect the tokens of a balanced group, openers and closer excluded;
    /// the cursor sits on the opener.
    fn collect_balanced(&mut self, open: char, close: char) -> Vec<Tok> {
        let mut out = Vec::new();
        let mut depth = 0i32;
        while let Some(t) = self.bump() {
            match &t.tok {
                Tok::Punct(c) if *c == open => {
                    depth += 1;
                    if depth > 1 {
                        out.push(t.tok.clone());
                    }
                }
                Tok::Punct(c) if *c == close => {
                    depth -= 1;
                    if depth == 0 {
                        return out;
                    }
                    out.push(t.tok.clone());
                }
                tok => out.push(tok.clone()),
            }
        }
        out
    }
}

/// Render tokens back to compact text; string literals regain their quotes.
fn render(toks: &[Tok]) -> String {
    let mut out = String::new();
    let mut prev_ident = false;
    for tok in toks {
        match tok {
            Tok::Ident(w) => {
                if prev_ident {
                    out.push(' ');
                }
                out.push_str(w);
                prev_ident = true;
            }
            Tok::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    if c == '"' || c == '\\' {
                        out.push('\\');
                    }
                    out.push(c);
                }
                out.push('"');
                prev_ident = false;
            }
            Tok::Punct(c) => {
                out.push(*c);
                prev_ident = false;
            }
        }
    }
    out
}

/// Split `key = value, value2` argument lists on top-level commas.
fn parse_annotation_args(toks: &[Tok], args: &mut BTreeMap<String, String>) {
    let mut groups: Vec<Vec<Tok>> = vec![Vec::new()];
    let mut depth = 0i32;
    for tok in toks {
        match tok {
            Tok::Punct(c @ ('(' | '{' | '[')) => {
                depth += 1;
                groups.last_mut().unwrap().push(Tok::Punct(*c));
            }
            Tok::Punct(c @ (')' | '}' | ']')) => {
                depth -= 1;
                groups.last_mut().unwrap().push(Tok::Punct(*c));
            }
            Tok::Punct(',') if depth == 0 => groups.push(Vec::new()),
            tok => groups.last_mut().unwrap().push(tok.clone()),
        }
    }
    for group in groups {
        if group.is_empty() {
            continue;
        }
        // `name = rest` when the second token is a bare '='.
        let named = matches!(group.first(), Some(Tok::Ident(_)))
            && matches!(group.get(1), Some(Tok::Punct('=')));
        if named {
            let key = match &group[0] {
                Tok::Ident(w) => w.clone(),
                _ => unreachable!(),
            };
            args.insert(key, render(&group[2..]));
        } else {
            let rendered = render(&group);
            args.entry(String::new())
                .and_modify(|v| {
                    v.push(',');
                    v.push_str(&rendered);
                })
                .or_insert(rendered);
        }
    }
}

const MODIFIERS: &[&str] = &[
    "public", "private", "protected", "static", "final", "abstract", "synchronized", "native",
    "transient", "volatile", "strictfp", "default",
];

/// Scan one source file into its top-level class declarations.
pub fn scan_source(source: &str, file: &str) -> (Vec<ClassDecl>, Vec<Diagnostic>) {
    let toks = lex(source);
    let mut parser = Parser { toks: &toks, pos: 0, source, file, diagnostics: Vec::new() };
    let mut classes = Vec::new();
    let mut pending: Vec<AnnotationSite> = Vec::new();

    while parser.peek().is_some() {
        if parser.at_punct('@') {
            if let Some(site) = parser.annotation() {
                pending.push(site);
            }
            continue;
        }
        if parser.at_ident("class") {
            let annotations = std::mem::take(&mut pending);
            if let Some(class) = parser.class_decl(annotations) {
                classes.push(class);
            }
            continue;
        }
        if parser.at_ident("interface") || parser.at_ident("enum") || parser.at_ident("record") {
            // Only classes carry the facts this tool extracts; skip the body.
            pending.clear();
            while let Some(tok) = parser.peek() {
                if matches!(tok, Tok::Punct('{')) {
                    parser.skip_balanced('{', '}');
                    break;
                }
                if matches!(tok, Tok::Punct(';')) {
                    parser.bump();
                    break;
                }
                parser.bump();
            }
            continue;
        }
        parser.bump();
    }
    (classes, parser.diagnostics)
}

impl<'a> Parser<'a> {
    /// The cursor sits on `class`. Returns None when no body follows.
    fn class_decl(&mut self, annotations: Vec<AnnotationSite>) -> Option<ClassDecl> {
        let line = self.line();
        self.bump();
        let name = match self.peek() {
            Some(Tok::Ident(w)) => w.clone(),
            _ => {
                self.warn("class keyword without a name".to_string(), line);
                return None;
            }
        };
        self.bump();
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Punct('{') => break,
                Tok::Punct(';') => {
                    self.bump();
                    return None;
                }
                _ => {
                    self.bump();
                }
            }
        }
        if !self.at_punct('{') {
            return None;
        }
        self.bump();

        let mut class = ClassDecl {
            name: name.clone(),
            annotations,
            fields: Vec::new(),
            methods: Vec::new(),
            constants: BTreeMap::new(),
            source_loc: SourceLoc { file: self.file.to_string(), line },
        };
        let mut pending: Vec<AnnotationSite> = Vec::new();
        loop {
            match self.peek() {
                None => break,
                Some(Tok::Punct('}')) => {
                    self.bump();
                    break;
                }
                Some(Tok::Punct('@')) => {
                    if let Some(site) = self.annotation() {
                        pending.push(site);
                    }
                }
                Some(Tok::Punct(';')) => {
                    self.bump();
                    pending.clear();
                }
                _ if self.at_inner_type() => {
                    // Inner type, possibly behind modifiers: ignored wholesale.
                    pending.clear();
                    while let Some(tok) = self.peek() {
                        match tok {
                            Tok::Punct('{') => {
                                self.skip_balanced('{', '}');
                                break;
                            }
                            Tok::Punct(';') => {
                                self.bump();
                                break;
                            }
                            _ => {
                                self.bump();
                            }
                        }
                    }
                }
                _ if self.at_initializer_block() => {
                    // Instance or static initializer block.
                    while !self.at_punct('{') {
                        self.bump();
                    }
                    self.skip_balanced('{', '}');
                    pending.clear();
                }
                _ => {
                    let annotations = std::mem::take(&mut pending);
                    self.member(&name, annotations, &mut class);
                }
            }
        }
        Some(class)
    }

    /// Parse one member (field or method) of `class_name`. The cursor sits
    /// on the first non-annotation token of the member.
    fn member(&mut self, class_name: &str, annotations: Vec<AnnotationSite>, out: &mut ClassDecl) {
        let line = self.line();
        // Accumulate header tokens up to '(' (method), '=' (initialized
        // field) or ';' (plain field). Generic groups are kept inline.
        let mut header: Vec<Tok> = Vec::new();
        let mut angle = 0i32;
        loop {
            let Some(tok) = self.peek() else { return };
            match tok {
                Tok::Punct('<') => {
                    angle += 1;
                    header.push(Tok::Punct('<'));
                    self.bump();
                }
                Tok::Punct('>') => {
                    angle -= 1;
                    header.push(Tok::Punct('>'));
                    self.bump();
                }
                Tok::Punct('(') if angle <= 0 => {
                    let params = self.collect_balanced('(', ')');
                    self.method(class_name, header, params, annotations, line, out);
                    return;
                }
                Tok::Punct('=') if angle <= 0 => {
                    self.bump();
                    let init = self.initializer();
                    self.field(header, Some(init), line, out);
                    return;
                }
                Tok::Punct(';') if angle <= 0 => {
                    self.bump();
                    self.field(header, None, line, out);
                    return;
                }
                Tok::Punct('}') if angle <= 0 => {
                    // Member ran into the class closer: malformed.
                    self.warn(format!("unrecognized member in class {class_name}"), line);
                    return;
                }
                other => {
                    header.push(other.clone());
                    self.bump();
                }
            }
        }
    }

    /// Consume an initializer expression up to its terminating ';'.
    fn initializer(&mut self) -> Vec<Tok> {
        let mut toks = Vec::new();
        let mut depth = 0i32;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Punct(c @ ('(' | '{' | '[')) => {
                    depth += 1;
                    toks.push(Tok::Punct(*c));
                    self.bump();
                }
                Tok::Punct(c @ (')' | '}' | ']')) => {
                    if depth == 0 {
                        // Initializer ran into the class closer.
                        return toks;
                    }
                    depth -= 1;
                    toks.push(Tok::Punct(*c));
                    self.bump();
                }
                Tok::Punct(';') if depth == 0 => {
                    self.bump();
                    return toks;
                }
                other => {
                    toks.push(other.clone());
                    self.bump();
                }
            }
        }
        toks
    }

    fn field(&mut self, header: Vec<Tok>, init: Option<Vec<Tok>>, line: u32, out: &mut ClassDecl) {
        let (modifiers, rest) = split_modifiers(&header);
        // Split `Type a, b` declarator lists on commas outside generics.
        let mut declarators: Vec<&[Tok]> = Vec::new();
        let mut angle = 0i32;
        let mut start = 0;
        for (i, tok) in rest.iter().enumerate() {
            match tok {
                Tok::Punct('<') => angle += 1,
                Tok::Punct('>') => angle -= 1,
                Tok::Punct(',') if angle == 0 => {
                    declarators.push(&rest[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        declarators.push(&rest[start..]);

        let first = declarators[0];
        let Some(name_idx) = first.iter().rposition(|t| matches!(t, Tok::Ident(_))) else {
            if !header.is_empty() {
                self.warn("unrecognized field shape".to_string(), line);
            }
            return;
        };
        if name_idx == 0 {
            self.warn("field without a type".to_string(), line);
            return;
        }
        let type_name = render(&first[..name_idx]);
        if type_name.is_empty() {
            return;
        }
        let mut names = vec![match &first[name_idx] {
            Tok::Ident(w) => w.clone(),
            _ => unreachable!(),
        }];
        for extra in &declarators[1..] {
            if let Some(Tok::Ident(w)) = extra.first() {
                names.push(w.clone());
            }
        }

        let is_static = modifiers.iter().any(|m| m == "static");
        let is_final = modifiers.iter().any(|m| m == "final");
        if is_static && is_final && type_name == "String" && names.len() == 1 {
            if let Some(init) = &init {
                if let Some(value) = constant_string(init, &out.constants) {
                    out.constants.insert(names[0].clone(), value);
                }
            }
        }
        if !is_static {
            for name in names {
                out.fields.push(EntityField { name, type_name: type_name.clone() });
            }
        }
    }

    fn method(
        &mut self,
        class_name: &str,
        header: Vec<Tok>,
        params: Vec<Tok>,
        annotations: Vec<AnnotationSite>,
        line: u32,
        out: &mut ClassDecl,
    ) {
        let (_, rest) = split_modifiers(&header);
        let Some(Tok::Ident(name)) = rest.last() else {
            self.warn(format!("unrecognized method shape in class {class_name}"), line);
            self.skip_member_tail();
            return;
        };
        let name = name.clone();
        // Drop a leading generic type-parameter group like `<T>`.
        let mut type_toks = &rest[..rest.len() - 1];
        if let Some(Tok::Punct('<')) = type_toks.first() {
            let mut depth = 0i32;
            let mut close = 0;
            for (i, t) in type_toks.iter().enumerate() {
                match t {
                    Tok::Punct('<') => depth += 1,
                    Tok::Punct('>') => {
                        depth -= 1;
                        if depth == 0 {
                            close = i + 1;
                            break;
                        }
                    }
                    _ => {}
                }
            }
            type_toks = &type_toks[close..];
        }
        let return_type = if type_toks.is_empty() {
            // Constructor: the name is the class name, nothing is returned.
            String::new()
        } else {
            render(type_toks)
        };

        // Skip `throws A, B` and find the body or the abstract ';'.
        let mut body = String::new();
        let mut body_line = line;
        loop {
            match self.peek() {
                Some(Tok::Punct('{')) => {
                    body_line = self.line();
                    let start_tok = self.pos;
                    self.skip_balanced('{', '}');
                    let open_end = self.toks[start_tok].end;
                    let close_end = self.toks[self.pos - 1].end;
                    body = self.source[open_end..close_end.saturating_sub(1).max(open_end)]
                        .to_string();
                    break;
                }
                Some(Tok::Punct(';')) => {
                    self.bump();
                    break;
                }
                Some(_) => {
                    self.bump();
                }
                None => break,
            }
        }
        out.methods.push(MethodDecl {
            name,
            return_type,
            params: parse_params(&params),
            annotations,
            body,
            body_line,
            line,
        });
    }

    /// After a malformed signature, drop everything up to the member's end.
    fn skip_member_tail(&mut self) {
        loop {
            match self.peek() {
                Some(Tok::Punct('{')) => {
                    self.skip_balanced('{', '}');
                    return;
                }
                Some(Tok::Punct(';')) => {
                    self.bump();
                    return;
                }
                Some(_) => {
                    self.bump();
                }
                None => return,
            }
        }
    }
}

fn split_modifiers(toks: &[Tok]) -> (Vec<String>, &[Tok]) {
    let mut modifiers = Vec::new();
    let mut idx = 0;
    while let Some(Tok::Ident(w)) = toks.get(idx) {
        if MODIFIERS.contains(&w.as_str()) {
            modifiers.push(w.clone());
            idx += 1;
        } else {
            break;
        }
    }
    (modifiers, &toks[idx..])
}

/// Evaluate an initializer that is a string literal or a '+' chain of
/// literals and already known constants.
fn constant_string(toks: &[Tok], constants: &BTreeMap<String, String>) -> Option<String> {
    let mut value = String::new();
    let mut expect_operand = true;
    for tok in toks {
        match tok {
            Tok::Str(s) if expect_operand => {
                value.push_str(s);
                expect_operand = false;
            }
            Tok::Ident(w) if expect_operand => {
                value.push_str(constants.get(w)?);
                expect_operand = false;
            }
            Tok::Punct('+') if !expect_operand => expect_operand = true,
            _ => return None,
        }
    }
    if expect_operand {
        return None;
    }
    Some(value)
}

/// Parse a parameter list: `[@Anno] [final] Type name, ...`.
fn parse_params(toks: &[Tok]) -> Vec<ParamDecl> {
    let mut params = Vec::new();
    let mut groups: Vec<Vec<Tok>> = vec![Vec::new()];
    let mut depth = 0i32;
    for tok in toks {
        match tok {
            Tok::Punct(c @ ('(' | '{' | '[' | '<')) => {
                depth += 1;
                groups.last_mut().unwrap().push(Tok::Punct(*c));
            }
            Tok::Punct(c @ (')' | '}' | ']' | '>')) => {
                depth -= 1;
                groups.last_mut().unwrap().push(Tok::Punct(*c));
            }
            Tok::Punct(',') if depth == 0 => groups.push(Vec::new()),
            tok => groups.last_mut().unwrap().push(tok.clone()),
        }
    }
    for group in groups {
        if group.is_empty() {
            continue;
        }
        let mut annotations = Vec::new();
        let mut i = 0;
        while i < group.len() {
            if matches!(group[i], Tok::Punct('@')) {
                let (site, next) = parse_inline_annotation(&group, i);
                if let Some(site) = site {
                    annotations.push(site);
                }
                i = next;
                continue;
            }
            if matches!(&group[i], Tok::Ident(w) if w == "final") {
                i += 1;
                continue;
            }
            break;
        }
        let rest = &group[i..];
        let Some(name_idx) = rest.iter().rposition(|t| matches!(t, Tok::Ident(_))) else {
            continue;
        };
        if name_idx == 0 {
            continue;
        }
        let name = match &rest[name_idx] {
            Tok::Ident(w) => w.clone(),
            _ => unreachable!(),
        };
        params.push(ParamDecl { name, type_name: render(&rest[..name_idx]), annotations });
    }
    params
}

/// Parse an annotation from a token slice (parameter position); returns the
/// site and the index just past it.
fn parse_inline_annotation(toks: &[Tok], at: usize) -> (Option<AnnotationSite>, usize) {
    let mut i = at + 1;
    let mut name = String::new();
    while let Some(Tok::Ident(w)) = toks.get(i) {
        name = w.clone();
        i += 1;
        if matches!(toks.get(i), Some(Tok::Punct('.'))) {
            i += 1;
        } else {
            break;
        }
    }
    if name.is_empty() {
        return (None, at + 1);
    }
    let mut args = BTreeMap::new();
    if matches!(toks.get(i), Some(Tok::Punct('('))) {
        let mut depth = 0i32;
        let start = i;
        while i < toks.len() {
            match toks[i] {
                Tok::Punct('(') => depth += 1,
                Tok::Punct(')') => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                _ => {}
            }
            i += 1;
        }
        parse_annotation_args(&toks[start + 1..i], &mut args);
        i += 1;
    }
    (Some(AnnotationSite { name, args, line: 0 }), i)
}
