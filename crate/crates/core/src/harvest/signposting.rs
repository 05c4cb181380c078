//! Signposting: typed links from HTTP `Link` headers (RFC 8288) and HTML
//! `<link>` elements.
//!
//! Parsing is total. Link-values that cannot be parsed are skipped and
//! counted in [`Signposting::malformed`].

use std::sync::LazyLock;

use scraper::{Html, Selector};
use serde::{Deserialize, Serialize};
use url::Url;

static LINK: LazyLock<Selector> = LazyLock::new(|| Selector::parse("link[rel][href]").unwrap());

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypedLink {
    pub relation: String,
    pub href: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub media_type: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signposting {
    pub links: Vec<TypedLink>,
    /// Link-values skipped because they did not follow the link-value grammar.
    pub malformed: usize,
}

impl Signposting {
    pub fn with_relation<'a>(
        &'a self,
        relation: &'a str,
    ) -> impl Iterator<Item = &'a TypedLink> + 'a {
        self.links.iter().filter(move |l| l.relation == relation)
    }

    fn push(&mut self, link: TypedLink) {
        let dup = self
            .links
            .iter()
            .any(|l| l.relation == link.relation && l.href == link.href);
        if !dup {
            self.links.push(link);
        }
    }
}

/// Parses every `Link` header value and then the `<link>` elements of
/// `document`, header links first. Relative targets are resolved against
/// `base` when given.
pub fn parse_signposting(
    link_headers: &[String],
    document: Option<&[u8]>,
    base: Option<&str>,
) -> Signposting {
    let base = base.and_then(|b| Url::parse(b).ok());
    let mut out = Signposting::default();
    for header in link_headers {
        let parsed = parse_link_header(header);
        out.malformed += parsed.malformed;
        for link in parsed.links {
            out.push(resolve(link, base.as_ref()));
        }
    }
    if let Some(doc) = document {
        let text = String::from_utf8_lossy(doc);
        let html = Html::parse_document(&text);
        for el in html.select(&LINK) {
            let attrs = el.value();
            let href = attrs.attr("href").unwrap_or_default().trim();
            let rel = attrs.attr("rel").unwrap_or_default();
            if href.is_empty() || rel.trim().is_empty() {
                out.malformed += 1;
                continue;
            }
            let media_type = attrs
                .attr("type")
                .map(str::to_string)
                .filter(|t| !t.is_empty());
            for relation in rel.split_ascii_whitespace() {
                out.push(resolve(
                    TypedLink {
                        relation: relation.to_ascii_lowercase(),
                        href: href.to_string(),
                        media_type: media_type.clone(),
                    },
                    base.as_ref(),
                ));
            }
        }
    }
    out
}

fn resolve(mut link: TypedLink, base: Option<&Url>) -> TypedLink {
    if let Some(joined) = base.and_then(|b| b.join(&link.href).ok()) {
        link.href = joined.into();
    }
    link
}

/// Parses one `Link` header field value: comma-separated link-values of the
/// form `<uri>; rel="r"; type="t"`.
pub fn parse_link_header(value: &str) -> Signposting {
    let mut out = Signposting::default();
    let mut cur = Cursor::new(value);
    loop {
        cur.skip_while(|c| c.is_ascii_whitespace() || c == ',');
        if cur.at_end() {
            break;
        }
        match parse_link_value(&mut cur) {
            Some(links) => links.into_iter().for_each(|l| out.push(l)),
            None => {
                out.malformed += 1;
                cur.skip_to_next_value();
            }
        }
    }
    out
}

fn parse_link_value(cur: &mut Cursor) -> Option<Vec<TypedLink>> {
    if !cur.eat('<') {
        return None;
    }
    let href = cur.take_until('>')?.trim().to_string();
    let mut rel: Option<String> = None;
    let mut media_type: Option<String> = None;
    loop {
        cur.skip_while(|c| c == ' ' || c == '\t');
        match cur.peek() {
            None | Some(',') => break,
            Some(';') => {
                cur.bump();
            }
            Some(_) => return None,
        }
        cur.skip_while(|c| c == ' ' || c == '\t');
        let name = cur.take_token().to_ascii_lowercase();
        cur.skip_while(|c| c == ' ' || c == '\t');
        let param_value = if cur.eat('=') {
            cur.skip_while(|c| c == ' ' || c == '\t');
            if cur.peek() == Some('"') {
                cur.bump();
                Some(cur.take_quoted()?)
            } else {
                Some(cur.take_token().to_string())
            }
        } else {
            None
        };
        if name.is_empty() {
            // `;;` or `; =x` are tolerated only when nothing follows the `;`
            if param_value.is_some() {
                return None;
            }
            continue;
        }
        // the first occurrence of rel and type wins
        match name.as_str() {
            "rel" if rel.is_none() => rel = param_value,
            "type" if media_type.is_none() => media_type = param_value,
            _ => {}
        }
    }
    let rel = rel.filter(|r| !r.trim().is_empty())?;
    if href.is_empty() {
        return None;
    }
    Some(
        rel.split_ascii_whitespace()
            .map(|r| TypedLink {
                relation: r.to_ascii_lowercase(),
                href: href.clone(),
                media_type: media_type.clone().filter(|t| !t.is_empty()),
            })
            .collect(),
    )
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_while(&mut self, f: impl Fn(char) -> bool) {
        while self.peek().is_some_and(&f) {
            self.pos += 1;
        }
    }

    /// Consumes through `end`, returning what preceded it; `None` if `end`
    /// never occurs (everything is consumed).
    fn take_until(&mut self, end: char) -> Option<String> {
        let start = self.pos;
        while let Some(c) = self.bump() {
            if c == end {
                return Some(self.chars[start..self.pos - 1].iter().collect());
            }
        }
        None
    }

    fn take_token(&mut self) -> String {
        let start = self.pos;
        self.skip_while(|c| {
            !matches!(c, ';' | ',' | '=' | '"' | '<' | '>') && !c.is_ascii_whitespace()
        });
        self.chars[start..self.pos].iter().collect()
    }

    /// Reads the remainder of a quoted-string whose opening quote has been
    /// consumed, honoring backslash escapes.
    fn take_quoted(&mut self) -> Option<String> {
        let mut out = String::new();
        loop {
            match self.bump()? {
                '"' => return Some(out),
                '\\' => out.push(self.bump()?),
                c => out.push(c),
            }
        }
    }

    /// Skips to just past the next comma that is not inside `<...>` or a
    /// quoted-string.
    fn skip_to_next_value(&mut self) {
        let mut in_quote = false;
        let mut in_uri = false;
        while let Some(c) = self.bump() {
            match c {
                '\\' if in_quote => {
                    self.bump();
                }
                '"' if !in_uri => in_quote = !in_quote,
                '<' if !in_quote => in_uri = true,
                '>' if !in_quote => in_uri = false,
                ',' if !in_quote && !in_uri => return,
                _ => {}
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_describedby() {
        let p = parse_link_header(
            r#"<https://x/meta.xml>; rel="describedby"; type="application/rdf+xml""#,
        );
        assert_eq!(p.malformed, 0);
        assert_eq!(
            p.links,
            vec![TypedLink {
                relation: "describedby".into(),
                href: "https://x/meta.xml".into(),
                media_type: Some("application/rdf+xml".into()),
            }]
        );
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(parse_signposting(&[], None, None), Signposting::default());
        assert_eq!(parse_link_header(""), Signposting::default());
        let html = parse_signposting(&[], Some(b"<html><head></head></html>"), None);
        assert!(html.links.is_empty());
    }

    #[test]
    fn html_links_follow_headers() {
        let doc = br#"<html><head>
            <link rel="describedby" href="/meta.ttl" type="text/turtle">
            <link rel="cite-as" href="https://doi.org/10.1/x">
        </head></html>"#;
        let s = parse_signposting(
            &[r#"<https://doi.org/10.1/x>; rel="cite-as""#.to_string()],
            Some(doc),
            Some("https://repo.example.org/handle/1"),
        );
        let rels: Vec<_> = s
            .links
            .iter()
            .map(|l| (l.relation.as_str(), l.href.as_str()))
            .collect();
        assert_eq!(
            rels,
            [
                ("cite-as", "https://doi.org/10.1/x"),
                ("describedby", "https://repo.example.org/meta.ttl"),
            ]
        );
    }
}
