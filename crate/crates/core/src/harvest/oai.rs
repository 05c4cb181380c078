//! OAI-PMH 2.0 client for the three verbs the evaluator needs:
//! `Identify`, `ListMetadataFormats` and `GetRecord`.
//!
//! Responses are matched on the protocol namespace exactly; a document whose
//! root is not `OAI-PMH` in that namespace is a parse error.

use std::fmt;
use std::str::FromStr;

use roxmltree::{Document, Node};
use serde::{Deserialize, Serialize};
use url::Url;

use super::identifier::{resolve_identifier, IdentifierKind, IdentifierRef};
use super::session::HarvestSession;
use super::{HarvestError, MetadataElement, MetadataFormat, MetadataRecord, Source};

pub const OAI_NS: &str = "http://www.openarchives.org/OAI/2.0/";
pub const OAI_DC_NS: &str = "http://www.openarchives.org/OAI/2.0/oai_dc/";
pub const DC_NS: &str = "http://purl.org/dc/elements/1.1/";
pub const DCTERMS_NS: &str = "http://purl.org/dc/terms/";
pub const DIM_NS: &str = "http://www.dspace.org/xmlns/dspace/dim";
const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";

/// Short names used as the first term segment for known payload namespaces.
const KNOWN_NAMESPACES: &[(&str, &str)] = &[
    (DC_NS, "dc"),
    (DCTERMS_NS, "dcterms"),
    ("http://datacite.org/schema/kernel-4", "datacite"),
    ("http://datacite.org/schema/kernel-3", "datacite"),
    ("http://namespace.openaire.eu/schema/oaire/", "oaire"),
    ("http://www.w3.org/1999/02/22-rdf-syntax-ns#", "rdf"),
];

/// Error codes defined by OAI-PMH 2.0. Unknown codes are kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", from = "String")]
pub enum OaiErrorCode {
    BadArgument,
    BadResumptionToken,
    BadVerb,
    CannotDisseminateFormat,
    IdDoesNotExist,
    NoRecordsMatch,
    NoMetadataFormats,
    NoSetHierarchy,
    Other(String),
}

impl OaiErrorCode {
    pub const DEFINED: [&'static str; 8] = [
        "badArgument",
        "badResumptionToken",
        "badVerb",
        "cannotDisseminateFormat",
        "idDoesNotExist",
        "noRecordsMatch",
        "noMetadataFormats",
        "noSetHierarchy",
    ];

    pub fn as_str(&self) -> &str {
        match self {
            Self::BadArgument => "badArgument",
            Self::BadResumptionToken => "badResumptionToken",
            Self::BadVerb => "badVerb",
            Self::CannotDisseminateFormat => "cannotDisseminateFormat",
            Self::IdDoesNotExist => "idDoesNotExist",
            Self::NoRecordsMatch => "noRecordsMatch",
            Self::NoMetadataFormats => "noMetadataFormats",
            Self::NoSetHierarchy => "noSetHierarchy",
            Self::Other(s) => s,
        }
    }
}

impl FromStr for OaiErrorCode {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "badArgument" => Self::BadArgument,
            "badResumptionToken" => Self::BadResumptionToken,
            "badVerb" => Self::BadVerb,
            "cannotDisseminateFormat" => Self::CannotDisseminateFormat,
            "idDoesNotExist" => Self::IdDoesNotExist,
            "noRecordsMatch" => Self::NoRecordsMatch,
            "noMetadataFormats" => Self::NoMetadataFormats,
            "noSetHierarchy" => Self::NoSetHierarchy,
            other => Self::Other(other.to_string()),
        })
    }
}

impl From<String> for OaiErrorCode {
    fn from(s: String) -> Self {
        s.parse().unwrap()
    }
}

impl From<OaiErrorCode> for String {
    fn from(c: OaiErrorCode) -> Self {
        c.as_str().to_string()
    }
}

impl fmt::Display for OaiErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepositoryDescriptor {
    pub name: String,
    pub base_url: String,
    pub protocol_version: String,
    pub admin_emails: Vec<String>,
}

pub fn oai_identify(
    session: &HarvestSession,
    endpoint: &str,
) -> Result<RepositoryDescriptor, HarvestError> {
    let body = request(session, endpoint, &[("verb", "Identify")])?;
    parse_identify(&body)
}

/// Formats the repository can disseminate, optionally for one item only.
pub fn oai_list_metadata_formats(
    session: &HarvestSession,
    endpoint: &str,
    identifier: Option<&str>,
) -> Result<Vec<MetadataFormat>, HarvestError> {
    let mut params = vec![("verb", "ListMetadataFormats")];
    if let Some(id) = identifier {
        params.push(("identifier", id));
    }
    let body = request(session, endpoint, &params)?;
    parse_metadata_formats(&body)
}

pub fn oai_get_record(
    session: &HarvestSession,
    endpoint: &str,
    identifier: &str,
    prefix: &str,
) -> Result<MetadataRecord, HarvestError> {
    let body = request(
        session,
        endpoint,
        &[
            ("verb", "GetRecord"),
            ("identifier", identifier),
            ("metadataPrefix", prefix),
        ],
    )?;
    let subject = resolve_identifier(identifier).unwrap_or_else(|_| IdentifierRef {
        raw: identifier.to_string(),
        kind: IdentifierKind::InternalId,
        normalized: identifier.to_string(),
        resolver_url: None,
    });
    parse_record(&body, subject)
}

/// Builds the request URL for `verb` and its arguments.
pub fn request_url(endpoint: &str, params: &[(&str, &str)]) -> Result<String, HarvestError> {
    let mut url =
        Url::parse(endpoint).map_err(|_| HarvestError::InvalidUrl(endpoint.to_string()))?;
    if !matches!(url.scheme(), "http" | "https") {
        return Err(HarvestError::InvalidUrl(endpoint.to_string()));
    }
    url.query_pairs_mut().extend_pairs(params);
    Ok(url.into())
}

fn request(
    session: &HarvestSession,
    endpoint: &str,
    params: &[(&str, &str)],
) -> Result<String, HarvestError> {
    let url = request_url(endpoint, params)?;
    let fetched = session.fetch_ok(&url)?;
    String::from_utf8(fetched.response.body.clone())
        .map_err(|_| HarvestError::Parse("response is not UTF-8".into()))
}

fn parse_envelope(xml: &str) -> Result<Document<'_>, HarvestError> {
    let doc = Document::parse(xml).map_err(|e| HarvestError::Parse(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().namespace() != Some(OAI_NS) || root.tag_name().name() != "OAI-PMH" {
        return Err(HarvestError::Parse(format!(
            "expected OAI-PMH root in {OAI_NS}, found {:?}",
            root.tag_name()
        )));
    }
    if let Some(err) = oai_children(root, "error").next() {
        return Err(HarvestError::Protocol {
            code: err.attribute("code").unwrap_or_default().to_string().into(),
            message: text_of(err),
        });
    }
    Ok(doc)
}

fn oai_children<'a, 'input: 'a>(
    node: Node<'a, 'input>,
    name: &'a str,
) -> impl Iterator<Item = Node<'a, 'input>> + 'a {
    node.children().filter(move |n| {
        n.is_element() && n.tag_name().namespace() == Some(OAI_NS) && n.tag_name().name() == name
    })
}

fn oai_child<'a, 'input: 'a>(node: Node<'a, 'input>, name: &'a str) -> Option<Node<'a, 'input>> {
    oai_children(node, name).next()
}

fn required<'a, 'input: 'a>(
    node: Node<'a, 'input>,
    name: &'a str,
) -> Result<Node<'a, 'input>, HarvestError> {
    oai_child(node, name).ok_or_else(|| HarvestError::Parse(format!("missing <{name}>")))
}

fn text_of(node: Node) -> String {
    node.descendants()
        .filter(|n| n.is_text())
        .filter_map(|n| n.text())
        .collect::<String>()
        .trim()
        .to_string()
}

pub fn parse_identify(xml: &str) -> Result<RepositoryDescriptor, HarvestError> {
    let doc = parse_envelope(xml)?;
    let identify = required(doc.root_element(), "Identify")?;
    Ok(RepositoryDescriptor {
        name: text_of(required(identify, "repositoryName")?),
        base_url: text_of(required(identify, "baseURL")?),
        protocol_version: text_of(required(identify, "protocolVersion")?),
        admin_emails: oai_children(identify, "adminEmail").map(text_of).collect(),
    })
}

pub fn parse_metadata_formats(xml: &str) -> Result<Vec<MetadataFormat>, HarvestError> {
    let doc = parse_envelope(xml)?;
    let list = required(doc.root_element(), "ListMetadataFormats")?;
    let mut formats: Vec<MetadataFormat> = Vec::new();
    for node in oai_children(list, "metadataFormat") {
        let format = MetadataFormat {
            prefix: text_of(required(node, "metadataPrefix")?),
            schema: oai_child(node, "schema").map(text_of).unwrap_or_default(),
            namespace: oai_child(node, "metadataNamespace")
                .map(text_of)
                .unwrap_or_default(),
        };
        if !formats.iter().any(|f| f.prefix == format.prefix) {
            formats.push(format);
        }
    }
    Ok(formats)
}

/// Parses a `GetRecord` response. `oai_dc` payloads map to `dc.<element>`,
/// DSpace `dim` fields to `<schema>.<element>[.<qualifier>]`; other payloads
/// contribute their leaf elements as `<namespace-short-name>.<local-name>`.
pub fn parse_record(xml: &str, subject: IdentifierRef) -> Result<MetadataRecord, HarvestError> {
    let doc = parse_envelope(xml)?;
    let get_record = required(doc.root_element(), "GetRecord")?;
    let record = required(get_record, "record")?;
    let mut out = MetadataRecord::new(subject);

    let deleted = oai_child(record, "header")
        .and_then(|h| h.attribute("status"))
        .is_some_and(|s| s == "deleted");
    if deleted {
        return Ok(out);
    }
    let Some(payload) =
        oai_child(record, "metadata").and_then(|m| m.children().find(|n| n.is_element()))
    else {
        return Ok(out);
    };

    let ns = payload.tag_name().namespace();
    if ns == Some(OAI_DC_NS) {
        for child in payload.children().filter(|n| n.is_element()) {
            push_leaf(&mut out.elements, child, &short_name(child));
        }
    } else if ns == Some(DIM_NS) {
        for field in payload
            .children()
            .filter(|n| n.is_element() && n.tag_name().name() == "field")
        {
            let term: Vec<&str> = ["mdschema", "element", "qualifier"]
                .iter()
                .filter_map(|a| field.attribute(*a))
                .filter(|s| !s.is_empty())
                .collect();
            let value = text_of(field);
            if value.is_empty() {
                continue;
            }
            if let Ok(e) = MetadataElement::new(&term.join("."), value, Source::OaiPmh) {
                out.elements
                    .push(e.with_language(field.attribute("lang").map(str::to_string)));
            }
        }
    } else {
        for leaf in payload
            .descendants()
            .filter(|n| n.is_element() && !n.children().any(|c| c.is_element()))
        {
            push_leaf(&mut out.elements, leaf, &short_name(leaf));
        }
    }
    Ok(out)
}

fn short_name(node: Node) -> String {
    let ns = node.tag_name().namespace().unwrap_or_default();
    let prefix = KNOWN_NAMESPACES
        .iter()
        .find(|(uri, _)| *uri == ns)
        .map(|(_, short)| short.to_string())
        .or_else(|| node.lookup_prefix(ns).map(str::to_string))
        .filter(|p| !p.is_empty())
        .unwrap_or_else(|| "md".to_string());
    format!("{prefix}.{}", node.tag_name().name())
}

fn push_leaf(out: &mut Vec<MetadataElement>, node: Node, term: &str) {
    let value = text_of(node);
    if value.is_empty() {
        return;
    }
    if let Ok(e) = MetadataElement::new(term, value, Source::OaiPmh) {
        let lang = node.attribute((XML_NS, "lang")).map(str::to_string);
        out.push(e.with_language(lang));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn envelope(body: &str) -> String {
        format!(
            r#"<?xml version="1.0" encoding="UTF-8"?>
<OAI-PMH xmlns="http://www.openarchives.org/OAI/2.0/">
  <responseDate>2022-03-01T10:00:00Z</responseDate>
  <request verb="X">https://repo.example.org/oai/request</request>
  {body}
</OAI-PMH>"#
        )
    }

    fn subject() -> IdentifierRef {
        resolve_identifier("10261/172425").unwrap()
    }

    #[test]
    fn identify() {
        let xml = envelope(
            "<Identify><repositoryName>Example Repository</repositoryName>\
             <baseURL>https://repo.example.org/oai/request</baseURL>\
             <protocolVersion>2.0</protocolVersion>\
             <adminEmail>a@example.org</adminEmail><adminEmail>b@example.org</adminEmail>\
             <earliestDatestamp>2008-01-01T00:00:00Z</earliestDatestamp>\
             <deletedRecord>persistent</deletedRecord><granularity>YYYY-MM-DDThh:mm:ssZ</granularity>\
             </Identify>",
        );
        let d = parse_identify(&xml).unwrap();
        assert_eq!(d.name, "Example Repository");
        assert_eq!(d.protocol_version, "2.0");
        assert_eq!(d.admin_emails.len(), 2);
    }

    #[test]
    fn every_defined_error_code_is_carried_verbatim() {
        for code in OaiErrorCode::DEFINED {
            let xml = envelope(&format!(r#"<error code="{code}">msg for {code}</error>"#));
            match parse_identify(&xml) {
                Err(HarvestError::Protocol { code: c, message }) => {
                    assert_eq!(c.as_str(), code);
                    assert!(!matches!(c, OaiErrorCode::Other(_)));
                    assert_eq!(message, format!("msg for {code}"));
                }
                other => panic!("{code}: {other:?}"),
            }
        }
    }

    #[test]
    fn wrong_namespace_is_parse_error() {
        let xml = r#"<OAI-PMH xmlns="http://www.openarchives.org/OAI/1.1/"><Identify/></OAI-PMH>"#;
        assert!(matches!(parse_identify(xml), Err(HarvestError::Parse(_))));
        assert!(matches!(
            parse_identify("<oops"),
            Err(HarvestError::Parse(_))
        ));
    }

    #[test]
    fn formats() {
        let xml = envelope(
            r#"<ListMetadataFormats>
  <metadataFormat><metadataPrefix>oai_dc</metadataPrefix>
    <schema>http://www.openarchives.org/OAI/2.0/oai_dc.xsd</schema>
    <metadataNamespace>http://www.openarchives.org/OAI/2.0/oai_dc/</metadataNamespace></metadataFormat>
  <metadataFormat><metadataPrefix>rdf</metadataPrefix>
    <schema>http://www.openarchives.org/OAI/2.0/rdf.xsd</schema>
    <metadataNamespace>http://www.openarchives.org/OAI/2.0/rdf/</metadataNamespace></metadataFormat>
</ListMetadataFormats>"#,
        );
        let f = parse_metadata_formats(&xml).unwrap();
        let prefixes: Vec<_> = f.iter().map(|f| f.prefix.as_str()).collect();
        assert_eq!(prefixes, ["oai_dc", "rdf"]);
    }

    #[test]
    fn oai_dc_record() {
        let xml = envelope(
            r#"<GetRecord><record>
<header><identifier>oai:repo:10261/172425</identifier><datestamp>2020-01-01</datestamp></header>
<metadata><oai_dc:dc xmlns:oai_dc="http://www.openarchives.org/OAI/2.0/oai_dc/" xmlns:dc="http://purl.org/dc/elements/1.1/">
  <dc:title xml:lang="en">Informed recruitment &amp; stock</dc:title>
  <dc:identifier>http://hdl.handle.net/10261/172425</dc:identifier>
  <dc:rights>openAccess</dc:rights>
  <dc:subject/>
</oai_dc:dc></metadata></record></GetRecord>"#,
        );
        let rec = parse_record(&xml, subject()).unwrap();
        let terms: Vec<_> = rec.elements.iter().map(|e| e.term.as_str()).collect();
        assert_eq!(terms, ["dc.title", "dc.identifier", "dc.rights"]);
        assert_eq!(rec.elements[0].value, "Informed recruitment & stock");
        assert_eq!(rec.elements[0].language.as_deref(), Some("en"));
        assert!(rec.elements.iter().all(|e| e.source == Source::OaiPmh));
    }

    #[test]
    fn dim_record_keeps_qualifiers() {
        let xml = envelope(
            r#"<GetRecord><record><header><identifier>x</identifier><datestamp>d</datestamp></header>
<metadata><dim:dim xmlns:dim="http://www.dspace.org/xmlns/dspace/dim">
  <dim:field mdschema="dc" element="identifier" qualifier="doi">10.20350/digitalCSIC/14559</dim:field>
  <dim:field mdschema="dc" element="rights" qualifier="license">https://creativecommons.org/licenses/by/4.0/</dim:field>
  <dim:field mdschema="dc" element="title" lang="es">Titulo</dim:field>
</dim:dim></metadata></record></GetRecord>"#,
        );
        let rec = parse_record(&xml, subject()).unwrap();
        let terms: Vec<_> = rec.elements.iter().map(|e| e.term.as_str()).collect();
        assert_eq!(
            terms,
            ["dc.identifier.doi", "dc.rights.license", "dc.title"]
        );
        assert_eq!(rec.elements[2].language.as_deref(), Some("es"));
    }

    #[test]
    fn empty_and_deleted_records() {
        let empty = envelope(
            "<GetRecord><record><header><identifier>x</identifier><datestamp>d</datestamp></header>\
             <metadata/></record></GetRecord>",
        );
        assert!(parse_record(&empty, subject()).unwrap().elements.is_empty());
        let deleted = envelope(
            r#"<GetRecord><record><header status="deleted"><identifier>x</identifier><datestamp>d</datestamp></header></record></GetRecord>"#,
        );
        assert!(parse_record(&deleted, subject())
            .unwrap()
            .elements
            .is_empty());
    }

    #[test]
    fn cannot_disseminate() {
        let xml = envelope(r#"<error code="cannotDisseminateFormat">no</error>"#);
        assert!(matches!(
            parse_record(&xml, subject()),
            Err(HarvestError::Protocol {
                code: OaiErrorCode::CannotDisseminateFormat,
                ..
            })
        ));
    }

    #[test]
    fn generic_payload_leaves() {
        let xml = envelope(
            r#"<GetRecord><record><header><identifier>x</identifier><datestamp>d</datestamp></header>
<metadata><resource xmlns="http://datacite.org/schema/kernel-4">
  <titles><title>T</title></titles><publisher>P</publisher></resource></metadata></record></GetRecord>"#,
        );
        let rec = parse_record(&xml, subject()).unwrap();
        let terms: Vec<_> = rec.elements.iter().map(|e| e.term.as_str()).collect();
        assert_eq!(terms, ["datacite.title", "datacite.publisher"]);
    }

    #[test]
    fn request_urls_are_encoded() {
        let u = request_url(
            "https://repo.example.org/oai/request",
            &[("verb", "GetRecord"), ("identifier", "oai:repo:10261/1")],
        )
        .unwrap();
        assert_eq!(
            u,
            "https://repo.example.org/oai/request?verb=GetRecord&identifier=oai%3Arepo%3A10261%2F1"
        );
        assert!(request_url("ftp://x/", &[]).is_err());
    }
}
