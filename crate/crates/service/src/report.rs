//! Report rendering: JSON, Markdown and a self-contained HTML page.

use std::fmt::Write;
use std::str::FromStr;

use fair_assess_core::scoring::format_score;

use crate::response::AssessmentResponse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum ReportFormat {
    #[default]
    Json,
    #[value(alias = "md")]
    Markdown,
    Html,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Markdown => "md",
            Self::Html => "html",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "md" | "markdown" => Ok(Self::Markdown),
            "html" => Ok(Self::Html),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

pub fn render(r: &AssessmentResponse, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("serializable");
            s.push('\n');
            s
        }
        ReportFormat::Markdown => markdown(r),
        ReportFormat::Html => html(r),
    }
}

fn verdict(points: f64, threshold: f64) -> &'static str {
    if points >= threshold {
        "pass"
    } else {
        "fail"
    }
}

// Table cells cannot hold raw pipes or line breaks.
fn md_cell(s: &str) -> String {
    s.replace('|', "\\|").replace(['\n', '\r'], " ")
}

fn markdown(r: &AssessmentResponse) -> String {
    let mut o = String::new();
    writeln!(o, "# FAIR assessment of {}\n", r.subject).unwrap();
    writeln!(o, "- Plugin: `{}`", r.plugin_id).unwrap();
    writeln!(o, "- Language: {}", r.lang).unwrap();
    writeln!(o, "- Total score: **{}**", format_score(r.total_score)).unwrap();
    for (g, s) in &r.group_scores {
        writeln!(o, "- {g}: {}", format_score(*s)).unwrap();
    }
    writeln!(
        o,
        "\n| Indicator | Priority | Weight | Points | Result | Feedback | Tips |"
    )
    .unwrap();
    writeln!(o, "|---|---|---|---|---|---|---|").unwrap();
    for b in &r.indicators {
        writeln!(
            o,
            "| {} {} | {} | {} | {} | {} | {} | {} |",
            b.id,
            md_cell(&b.name),
            b.indicator_level,
            b.weight,
            format_score(b.points),
            if b.excluded {
                "excluded"
            } else {
                verdict(b.points, r.pass_threshold)
            },
            md_cell(&b.technical_feedback),
            md_cell(&b.tips),
        )
        .unwrap();
    }
    if !r.harvest_notes.is_empty() {
        writeln!(o, "\n## Harvest notes\n").unwrap();
        for n in &r.harvest_notes {
            writeln!(o, "- {}", n.replace('\n', " ")).unwrap();
        }
    }
    o
}

pub fn escape_html(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

const STYLE: &str = "body{font-family:sans-serif;margin:2em}table{border-collapse:collapse}\
td,th{border:1px solid #ccc;padding:4px 8px;vertical-align:top}\
.pass{background:#e6f4e6}.fail{background:#fbe9e9}.excluded{color:#888}";

fn html(r: &AssessmentResponse) -> String {
    let e = escape_html;
    let mut o = String::new();
    writeln!(
        o,
        "<!DOCTYPE html>\n<html lang=\"{}\"><head><meta charset=\"utf-8\">\
         <title>FAIR assessment: {}</title><style>{STYLE}</style></head><body>",
        e(&r.lang),
        e(&r.subject)
    )
    .unwrap();
    writeln!(o, "<h1>FAIR assessment of {}</h1>", e(&r.subject)).unwrap();
    writeln!(
        o,
        "<p>Plugin <code>{}</code>. Total score <strong>{}</strong>.</p><ul>",
        e(&r.plugin_id),
        format_score(r.total_score)
    )
    .unwrap();
    for (g, s) in &r.group_scores {
        writeln!(o, "<li>{}: {}</li>", e(g), format_score(*s)).unwrap();
    }
    writeln!(
        o,
        "</ul><table><tr><th>Indicator</th><th>Priority</th><th>Weight</th>\
         <th>Points</th><th>Feedback</th><th>Tips</th></tr>"
    )
    .unwrap();
    for b in &r.indicators {
        let class = if b.excluded {
            "excluded"
        } else {
            verdict(b.points, r.pass_threshold)
        };
        writeln!(
            o,
            "<tr class=\"{class}\"><td>{} {}</td><td>{}</td><td>{}</td><td>{}</td>\
             <td>{}</td><td>{}</td></tr>",
            e(&b.id),
            e(&b.name),
            b.indicator_level,
            b.weight,
            format_score(b.points),
            e(&b.technical_feedback),
            e(&b.tips),
        )
        .unwrap();
    }
    o.push_str("</table>");
    if !r.harvest_notes.is_empty() {
        o.push_str("<h2>Harvest notes</h2><ul>");
        for n in &r.harvest_notes {
            write!(o, "<li>{}</li>", e(n)).unwrap();
        }
        o.push_str("</ul>");
    }
    o.push_str("</body></html>\n");
    o
}
