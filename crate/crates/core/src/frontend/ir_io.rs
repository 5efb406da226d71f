use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::SystemIR;

/// Parse, normalize and validate an intermediate representation document.
pub fn parse_ir(text: &str, origin: &Path) -> Result<SystemIR> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let mut ir: SystemIR =
        serde_path_to_error::deserialize(de).map_err(|e| Error::IrLoad {
            path: origin.to_path_buf(),
            message: format!("{} at {}", e.inner(), e.path()),
        })?;
    ir.normalize();
    if ir.services.is_empty() {
        return Err(Error::EmptySystem);
    }
    ir.validate()?;
    Ok(ir)
}

/// Load an intermediate representation file written by `save_ir`.
pub fn load_ir(path: &Path) -> Result<SystemIR> {
    let text = fs::read_to_string(path).map_err(|e| Error::IrLoad {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_ir(&text, path)
}

/// Write the intermediate representation as stable pretty-printed JSON.
pub fn save_ir(ir: &SystemIR, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(ir).map_err(|e| Error::IrLoad {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        EndpointDef, HttpMethod, ParamDef, ParamKind, PathTemplate, RestCall, SourceLoc, SystemIR,
        SystemMeta, UrlPart,
    };

    fn sample_ir() -> SystemIR {
        let mut ir = SystemIR::new(SystemMeta::unversioned("fixture"));
        ir.services = vec!["svc-b".into(), "svc-a".into()];
        ir.endpoints = vec![EndpointDef {
            service: "svc-b".into(),
            path: PathTemplate::parse("/api/v1/things/{Integer}").unwrap(),
            method: HttpMethod::Get,
            params: vec![ParamDef {
                name: "id".into(),
                declared_type: "Integer".into(),
                kind: ParamKind::Path,
            }],
            return_type: "Thing".into(),
            source_loc: SourceLoc { file: "svc-b/C.java".into(), line: 10 },
        }];
        ir.calls = vec![RestCall {
            caller: "svc-a".into(),
            url: vec![UrlPart::lit("/api/v1/things/"), UrlPart::hole("Integer")],
            method: HttpMethod::Get,
            arg_count: 2,
            expected_return_type: "Thing".into(),
            source_loc: SourceLoc { file: "svc-a/D.java".into(), line: 4 },
            unresolvable: false,
        }];
        ir.normalize();
        ir
    }

    #[test]
    fn save_and_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ir.json");
        let ir = sample_ir();
        save_ir(&ir, &path).unwrap();
        let loaded = load_ir(&path).unwrap();
        assert_eq!(loaded, ir);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("{\n  \"services\""));
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn load_normalizes_service_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ir.json");
        let text = r#"{"services": ["svc-b", "svc-a"], "endpoints": [], "calls": [], "entities": [], "meta": {"sourceRoot": "r", "revision": "unversioned", "toolVersion": "0"}}"#;
        std::fs::write(&path, text).unwrap();
        let loaded = load_ir(&path).unwrap();
        assert_eq!(loaded.services, vec!["svc-a".to_string(), "svc-b".to_string()]);
    }

    #[test]
    fn parse_errors_name_the_offending_path() {
        let text = r#"{"services": ["a"], "endpoints": [], "calls": [{"caller": "a", "url": [{"lit": 5}], "method": "GET", "argCount": 1, "expectedReturnType": "T", "sourceLoc": {"file": "f", "line": 1}}], "entities": [], "meta": {"sourceRoot": "r", "revision": "unversioned", "toolVersion": "0"}}"#;
        let err = parse_ir(text, Path::new("test.json")).unwrap_err();
        match err {
            Error::IrLoad { path, message } => {
                assert_eq!(path, Path::new("test.json"));
                assert!(message.contains("calls[0].url[0]"), "{message}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_service_lists_are_rejected() {
        let text = r#"{"services": [], "endpoints": [], "calls": [], "entities": [], "meta": {"sourceRoot": "r", "revision": "unversioned", "toolVersion": "0"}}"#;
        assert!(matches!(parse_ir(text, Path::new("x")), Err(Error::EmptySystem)));
    }

    #[test]
    fn validation_runs_on_load() {
        let text = r#"{"services": ["a"], "endpoints": [], "calls": [{"caller": "ghost", "url": [{"lit": "/x"}], "method": "GET", "argCount": 1, "expectedReturnType": "T", "sourceLoc": {"file": "f", "line": 1}}], "entities": [], "meta": {"sourceRoot": "r", "revision": "unversioned", "toolVersion": "0"}}"#;
        assert!(matches!(parse_ir(text, Path::new("x")), Err(Error::IrValidation { .. })));
    }

    #[test]
    fn missing_files_report_their_path() {
        let err = load_ir(Path::new("/nonexistent/ir.json")).unwrap_err();
        match err {
            Error::IrLoad { path, .. } => {
                assert!(path.display().to_string().contains("nonexistent"))
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
