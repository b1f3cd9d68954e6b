//! File ingestion: transfer logs, daily economic series, account labels.
//!
//! Accepted formats:
//!
//! - transfers: csv with header `from_address,to_address,value,block_timestamp`
//!   (extra columns ignored) or jsonl with the same keys;
//! - economic series: csv `date,PriceUSD,VtyDayRet30d[,tvlUSD]`;
//! - labels: csv `address,kind,tag` with kind `EOA` or `CA`.
//!
//! Timestamps are read as UTC and truncated to whole seconds. Addresses are
//! trimmed and lowercased before anything else sees them.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use chrono::{DateTime, NaiveDate, NaiveDateTime, Timelike, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),
    #[error("dates not increasing at {0}")]
    UnorderedDate(NaiveDate),
    #[error("non-positive price on {0}")]
    NonPositivePrice(NaiveDate),
    #[error("address {0} labelled more than once")]
    DuplicateAddress(String),
    #[error("input is not valid UTF-8")]
    Utf8,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, IngestError>;

fn malformed(line: u64, reason: impl Into<String>) -> IngestError {
    IngestError::MalformedRow { line, reason: reason.into() }
}

/// One token transfer.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferRecord {
    pub from_address: String,
    pub to_address: String,
    pub value: f64,
    pub timestamp: DateTime<Utc>,
}

impl TransferRecord {
    pub fn day(&self) -> NaiveDate {
        self.timestamp.date_naive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferFormat {
    Csv,
    Jsonl,
}

impl std::str::FromStr for TransferFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "jsonl" | "ndjson" => Ok(Self::Jsonl),
            other => Err(format!("unknown transfer format `{other}`")),
        }
    }
}

pub fn normalize_address(raw: &str) -> String {
    raw.trim().to_ascii_lowercase()
}

/// Parse an ISO-8601 style timestamp as UTC, truncated to seconds.
pub fn parse_timestamp(raw: &str) -> Option<DateTime<Utc>> {
    let s = raw.trim();
    let parsed = if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        Some(dt.with_timezone(&Utc))
    } else {
        let s = s.strip_suffix(" UTC").unwrap_or(s);
        ["%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M:%S%.f"]
            .iter()
            .find_map(|fmt| NaiveDateTime::parse_from_str(s, fmt).ok())
            .map(|naive| naive.and_utc())
    };
    parsed.and_then(|dt| dt.with_nanosecond(0))
}

pub fn format_timestamp(ts: &DateTime<Utc>) -> String {
    ts.format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

fn parse_value(raw: &str) -> Option<f64> {
    let v: f64 = raw.trim().parse().ok()?;
    (v.is_finite() && v >= 0.0).then_some(v)
}

fn decode_utf8(input: impl Read) -> Result<String> {
    let mut bytes = Vec::new();
    let mut input = input;
    input.read_to_end(&mut bytes)?;
    String::from_utf8(bytes).map_err(|_| IngestError::Utf8)
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case(name))
        .ok_or_else(|| IngestError::MissingColumn(name.to_string()))
}

fn record_line(rec: &csv::StringRecord) -> u64 {
    rec.position().map(|p| p.line()).unwrap_or(0)
}

fn build_record(
    line: u64,
    from: &str,
    to: &str,
    value: &str,
    ts: &str,
) -> Result<TransferRecord> {
    let from_address = normalize_address(from);
    let to_address = normalize_address(to);
    if from_address.is_empty() || to_address.is_empty() {
        return Err(malformed(line, "empty address"));
    }
    let value = parse_value(value).ok_or_else(|| malformed(line, format!("bad value `{value}`")))?;
    let timestamp =
        parse_timestamp(ts).ok_or_else(|| malformed(line, format!("bad timestamp `{ts}`")))?;
    Ok(TransferRecord { from_address, to_address, value, timestamp })
}

/// Parse transfers in input order. Zero-value rows are kept.
pub fn parse_transfers(input: impl Read, format: TransferFormat) -> Result<Vec<TransferRecord>> {
    let text = decode_utf8(input)?;
    match format {
        TransferFormat::Csv => parse_transfers_csv(&text),
        TransferFormat::Jsonl => parse_transfers_jsonl(&text),
    }
}

fn parse_transfers_csv(text: &str) -> Result<Vec<TransferRecord>> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let i_from = column(&headers, "from_address")?;
    let i_to = column(&headers, "to_address")?;
    let i_value = column(&headers, "value")?;
    let i_ts = column(&headers, "block_timestamp")?;
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = record_line(&row);
        let field = |i: usize| row.get(i).ok_or_else(|| malformed(line, "missing field"));
        out.push(build_record(line, field(i_from)?, field(i_to)?, field(i_value)?, field(i_ts)?)?);
    }
    Ok(out)
}

#[derive(Deserialize)]
struct JsonTransfer {
    from_address: String,
    to_address: String,
    value: serde_json::Value,
    block_timestamp: String,
}

fn parse_transfers_jsonl(text: &str) -> Result<Vec<TransferRecord>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx as u64 + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let obj: JsonTransfer =
            serde_json::from_str(raw).map_err(|e| malformed(line, e.to_string()))?;
        let value = match &obj.value {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(malformed(line, format!("bad value `{other}`"))),
        };
        out.push(build_record(line, &obj.from_address, &obj.to_address, &value, &obj.block_timestamp)?);
    }
    Ok(out)
}

/// Write transfers in the csv layout accepted by [`parse_transfers`].
pub fn write_transfers_csv(records: &[TransferRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["from_address", "to_address", "value", "block_timestamp"])?;
    for r in records {
        w.write_record([
            r.from_address.as_str(),
            r.to_address.as_str(),
            &r.value.to_string(),
            &format_timestamp(&r.timestamp),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Group records by UTC calendar day. Days without records are absent.
pub fn bucket_by_day(records: &[TransferRecord]) -> BTreeMap<NaiveDate, Vec<TransferRecord>> {
    let mut buckets: BTreeMap<NaiveDate, Vec<TransferRecord>> = BTreeMap::new();
    for r in records {
        buckets.entry(r.day()).or_default().push(r.clone());
    }
    buckets
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconRow {
    pub date: NaiveDate,
    pub price_usd: f64,
    pub vty_day_ret_30d: f64,
    pub tvl_usd: Option<f64>,
}

/// Daily economic observations, strictly increasing by date.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EconSeries {
    pub rows: Vec<EconRow>,
    /// Whether the source carried a `tvlUSD` column at all.
    pub has_tvl: bool,
}

impl EconSeries {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

pub fn parse_econ_series(input: impl Read) -> Result<EconSeries> {
    let text = decode_utf8(input)?;
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let i_date = column(&headers, "date")?;
    let i_price = column(&headers, "PriceUSD")?;
    let i_vty = column(&headers, "VtyDayRet30d")?;
    let i_tvl = column(&headers, "tvlUSD").ok();
    let mut rows: Vec<EconRow> = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = record_line(&row);
        let field = |i: usize| row.get(i).map(str::trim).ok_or_else(|| malformed(line, "missing field"));
        let date_raw = field(i_date)?;
        let date = NaiveDate::parse_from_str(date_raw, "%Y-%m-%d")
            .map_err(|_| malformed(line, format!("bad date `{date_raw}`")))?;
        let num = |raw: &str| -> Result<f64> {
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| malformed(line, format!("bad number `{raw}`")))
        };
        let price_usd = num(field(i_price)?)?;
        if price_usd <= 0.0 {
            return Err(IngestError::NonPositivePrice(date));
        }
        let vty_day_ret_30d = num(field(i_vty)?)?;
        if vty_day_ret_30d < 0.0 {
            return Err(malformed(line, "negative volatility"));
        }
        let tvl_usd = match i_tvl {
            Some(i) => match row.get(i).map(str::trim) {
                None | Some("") => None,
                Some(raw) => Some(num(raw)?),
            },
            None => None,
        };
        if let Some(prev) = rows.last() {
            if prev.date == date {
                return Err(IngestError::DuplicateDate(date));
            }
            if prev.date > date {
                return Err(IngestError::UnorderedDate(date));
            }
        }
        rows.push(EconRow { date, price_usd, vty_day_ret_30d, tvl_usd });
    }
    Ok(EconSeries { rows, has_tvl: i_tvl.is_some() })
}

pub fn write_econ_csv(series: &EconSeries, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if series.has_tvl {
        w.write_record(["date", "PriceUSD", "VtyDayRet30d", "tvlUSD"])?;
    } else {
        w.write_record(["date", "PriceUSD", "VtyDayRet30d"])?;
    }
    for r in &series.rows {
        let mut rec = vec![
            r.date.format("%Y-%m-%d").to_string(),
            r.price_usd.to_string(),
            r.vty_day_ret_30d.to_string(),
        ];
        if series.has_tvl {
            rec.push(r.tvl_usd.map(|v| v.to_string()).unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AccountKind {
    #[serde(rename = "EOA")]
    Eoa,
    #[serde(rename = "CA")]
    Ca,
}

impl AccountKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Eoa => "EOA",
            Self::Ca => "CA",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Label {
    pub kind: AccountKind,
    pub tag: Option<String>,
}

/// Address annotations keyed by normalized address.
pub type LabelMap = HashMap<String, Label>;

pub fn parse_labels(input: impl Read) -> Result<LabelMap> {
    let text = decode_utf8(input)?;
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let i_addr = column(&headers, "address")?;
    let i_kind = column(&headers, "kind")?;
    let i_tag = column(&headers, "tag").ok();
    let mut labels = LabelMap::new();
    for row in rdr.records() {
        let row = row?;
        let line = record_line(&row);
        let address = normalize_address(row.get(i_addr).unwrap_or(""));
        if address.is_empty() {
            return Err(malformed(line, "empty address"));
        }
        let kind = match row.get(i_kind).map(|k| k.trim().to_ascii_uppercase()) {
            Some(k) if k == "EOA" => AccountKind::Eoa,
            Some(k) if k == "CA" => AccountKind::Ca,
            other => return Err(malformed(line, format!("bad kind {other:?}"))),
        };
        let tag = i_tag
            .and_then(|i| row.get(i))
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::to_string);
        if labels.insert(address.clone(), Label { kind, tag }).is_some() {
            return Err(IngestError::DuplicateAddress(address));
        }
    }
    Ok(labels)
}
