//! Baseline sequential JFIF codec for one grayscale component, the DC-drop
//! transform and compression-ratio accounting.
//!
//! Only the subset this crate writes is read back: 8-bit precision, a single
//! component, Huffman coding, no restart intervals. The Huffman tables are
//! the fixed Annex K luminance tables.

use crate::blockdct::{CoeffBlock, CoeffGrid, QuantTable, BLOCK_LEN};
use crate::error::{Error, Result};

/// `ZIGZAG[k]` is the natural (row-major) index of the k-th coefficient in scan order.
pub const ZIGZAG: [usize; BLOCK_LEN] = [
    0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5, 12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6, 7, 14, 21,
    28, 35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51, 58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54,
    47, 55, 62, 63,
];

const DC_LUMA_BITS: [u8; 16] = [0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0];
const DC_LUMA_VALS: [u8; 12] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];
const AC_LUMA_BITS: [u8; 16] = [0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7d];
const AC_LUMA_VALS: [u8; 162] = [
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07, 0x22, 0x71, 0x14,
    0x32, 0x81, 0x91, 0xa1, 0x08, 0x23, 0x42, 0xb1, 0xc1, 0x15, 0x52, 0xd1, 0xf0, 0x24, 0x33, 0x62, 0x72, 0x82, 0x09,
    0x0a, 0x16, 0x17, 0x18, 0x19, 0x1a, 0x25, 0x26, 0x27, 0x28, 0x29, 0x2a, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a,
    0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49, 0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5a, 0x63, 0x64, 0x65,
    0x66, 0x67, 0x68, 0x69, 0x6a, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7a, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88,
    0x89, 0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9a, 0xa2, 0xa3, 0xa4, 0xa5, 0xa6, 0xa7, 0xa8, 0xa9,
    0xaa, 0xb2, 0xb3, 0xb4, 0xb5, 0xb6, 0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5, 0xc6, 0xc7, 0xc8, 0xc9, 0xca,
    0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda, 0xe1, 0xe2, 0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8, 0xe9, 0xea,
    0xf1, 0xf2, 0xf3, 0xf4, 0xf5, 0xf6, 0xf7, 0xf8, 0xf9, 0xfa,
];

/// Largest magnitude category the Annex K tables can code.
const MAX_DC_CATEGORY: u32 = 11;
const MAX_AC_CATEGORY: u32 = 10;

const SOI: u8 = 0xd8;
const EOI: u8 = 0xd9;
const SOF0: u8 = 0xc0;
const DHT: u8 = 0xc4;
const DQT: u8 = 0xdb;
const SOS: u8 = 0xda;
const DRI: u8 = 0xdd;
const APP0: u8 = 0xe0;

/// A complete JFIF byte stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedJpeg {
    bytes: Vec<u8>,
    scan_len: usize,
}

impl EncodedJpeg {
    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    /// Length of the entropy-coded segment (between the SOS header and EOI).
    pub fn scan_len(&self) -> usize {
        self.scan_len
    }

    pub fn total_len(&self) -> usize {
        self.bytes.len()
    }

    /// Wraps an existing stream, locating its scan segment.
    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        let layout = parse_layout(&bytes)?;
        Ok(Self { scan_len: layout.scan.len(), bytes })
    }
}

/// Transmitted DC values of the four corner blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CornerDcs {
    pub top_left: i32,
    pub top_right: i32,
    pub bottom_left: i32,
    pub bottom_right: i32,
}

/// File-size ratio of a DC-dropped stream to the standard one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionRatio {
    /// Whole files, headers included.
    pub total: f64,
    /// Entropy-coded segments only.
    pub scan: f64,
}

struct HuffmanEncoder {
    code: [u16; 256],
    size: [u8; 256],
}

/// Canonical code assignment shared by encoder and decoder.
fn canonical_codes(bits: &[u8; 16], vals: &[u8]) -> Vec<(u8, u16, u8)> {
    let mut out = Vec::with_capacity(vals.len());
    let mut code = 0u16;
    let mut k = 0;
    for (len_idx, &count) in bits.iter().enumerate() {
        for _ in 0..count {
            out.push((vals[k], code, (len_idx + 1) as u8));
            code += 1;
            k += 1;
        }
        code <<= 1;
    }
    out
}

impl HuffmanEncoder {
    fn new(bits: &[u8; 16], vals: &[u8]) -> Self {
        let mut enc = Self { code: [0; 256], size: [0; 256] };
        for (sym, code, len) in canonical_codes(bits, vals) {
            enc.code[sym as usize] = code;
            enc.size[sym as usize] = len;
        }
        enc
    }
}

struct BitWriter {
    out: Vec<u8>,
    acc: u32,
    nbits: u32,
}

impl BitWriter {
    fn new() -> Self {
        Self { out: Vec::new(), acc: 0, nbits: 0 }
    }

    fn put(&mut self, value: u32, len: u32) {
        debug_assert!(len <= 16);
        if len == 0 {
            return;
        }
        self.acc = (self.acc << len) | (value & ((1 << len) - 1));
        self.nbits += len;
        while self.nbits >= 8 {
            let byte = (self.acc >> (self.nbits - 8)) as u8;
            self.out.push(byte);
            if byte == 0xff {
                self.out.push(0x00);
            }
            self.nbits -= 8;
        }
        self.acc &= (1 << self.nbits) - 1;
    }

    fn put_symbol(&mut self, table: &HuffmanEncoder, sym: u8) {
        debug_assert!(table.size[sym as usize] > 0, "symbol {sym:#x} missing from table");
        self.put(u32::from(table.code[sym as usize]), u32::from(table.size[sym as usize]));
    }

    /// Pads the final byte with 1-bits.
    fn finish(mut self) -> Vec<u8> {
        if self.nbits > 0 {
            let pad = 8 - self.nbits;
            self.put((1 << pad) - 1, pad);
        }
        self.out
    }
}

fn category(v: i32) -> u32 {
    32 - v.unsigned_abs().leading_zeros()
}

/// Low `cat` bits of the JPEG magnitude encoding (one's complement for negatives).
fn magnitude_bits(v: i32, cat: u32) -> u32 {
    if v < 0 {
        (v - 1) as u32 & ((1 << cat) - 1)
    } else {
        v as u32
    }
}

fn push_marker(out: &mut Vec<u8>, marker: u8) {
    out.extend_from_slice(&[0xff, marker]);
}

fn push_segment(out: &mut Vec<u8>, marker: u8, payload: &[u8]) {
    push_marker(out, marker);
    out.extend_from_slice(&((payload.len() + 2) as u16).to_be_bytes());
    out.extend_from_slice(payload);
}

fn push_dht(out: &mut Vec<u8>, class_id: u8, bits: &[u8; 16], vals: &[u8]) {
    let mut payload = vec![class_id];
    payload.extend_from_slice(bits);
    payload.extend_from_slice(vals);
    push_segment(out, DHT, &payload);
}

/// Writes a baseline JFIF stream for the grid.
pub fn encode_baseline(grid: &CoeffGrid) -> Result<EncodedJpeg> {
    if grid.width() > usize::from(u16::MAX) || grid.height() > usize::from(u16::MAX) {
        return Err(Error::Capacity(format!("{}x{} exceeds JPEG dimensions", grid.width(), grid.height())));
    }
    let dc_table = HuffmanEncoder::new(&DC_LUMA_BITS, &DC_LUMA_VALS);
    let ac_table = HuffmanEncoder::new(&AC_LUMA_BITS, &AC_LUMA_VALS);

    let mut out = Vec::new();
    push_marker(&mut out, SOI);
    push_segment(&mut out, APP0, &[b'J', b'F', b'I', b'F', 0, 1, 1, 0, 0, 1, 0, 1, 0, 0]);

    let q = grid.quant().entries();
    let wide = q.iter().any(|&v| v > 255);
    let mut dqt = vec![if wide { 0x10 } else { 0x00 }];
    for &natural in ZIGZAG.iter() {
        if wide {
            dqt.extend_from_slice(&q[natural].to_be_bytes());
        } else {
            dqt.push(q[natural] as u8);
        }
    }
    push_segment(&mut out, DQT, &dqt);

    let (w, h) = (grid.width() as u16, grid.height() as u16);
    let mut sof = vec![8];
    sof.extend_from_slice(&h.to_be_bytes());
    sof.extend_from_slice(&w.to_be_bytes());
    sof.extend_from_slice(&[1, 1, 0x11, 0]);
    push_segment(&mut out, SOF0, &sof);

    push_dht(&mut out, 0x00, &DC_LUMA_BITS, &DC_LUMA_VALS);
    push_dht(&mut out, 0x10, &AC_LUMA_BITS, &AC_LUMA_VALS);
    push_segment(&mut out, SOS, &[1, 1, 0x00, 0, 63, 0]);

    let mut bits = BitWriter::new();
    let mut prev_dc = 0;
    for (i, block) in grid.blocks().iter().enumerate() {
        encode_block(&mut bits, block, prev_dc, &dc_table, &ac_table)
            .map_err(|e| Error::Capacity(format!("block {i}: {e}")))?;
        prev_dc = block.dc();
    }
    let scan = bits.finish();
    let scan_len = scan.len();
    out.extend_from_slice(&scan);
    push_marker(&mut out, EOI);
    Ok(EncodedJpeg { bytes: out, scan_len })
}

fn encode_block(
    bits: &mut BitWriter,
    block: &CoeffBlock,
    prev_dc: i32,
    dc_table: &HuffmanEncoder,
    ac_table: &HuffmanEncoder,
) -> std::result::Result<(), String> {
    let diff = block.dc() - prev_dc;
    let cat = category(diff);
    if cat > MAX_DC_CATEGORY {
        return Err(format!("DC difference {diff} out of range"));
    }
    bits.put_symbol(dc_table, cat as u8);
    bits.put(magnitude_bits(diff, cat), cat);

    let mut run = 0u32;
    for &natural in &ZIGZAG[1..] {
        let v = block.0[natural];
        if v == 0 {
            run += 1;
            continue;
        }
        while run >= 16 {
            bits.put_symbol(ac_table, 0xf0);
            run -= 16;
        }
        let cat = category(v);
        if cat > MAX_AC_CATEGORY {
            return Err(format!("AC coefficient {v} out of range"));
        }
        bits.put_symbol(ac_table, ((run << 4) | cat) as u8);
        bits.put(magnitude_bits(v, cat), cat);
        run = 0;
    }
    if run > 0 {
        bits.put_symbol(ac_table, 0x00);
    }
    Ok(())
}

struct HuffmanDecoder {
    // per code length (index 1..=16): smallest code, largest code (or -1), first value index
    mincode: [i32; 17],
    maxcode: [i32; 17],
    valptr: [usize; 17],
    vals: Vec<u8>,
}

impl HuffmanDecoder {
    fn new(bits: &[u8; 16], vals: &[u8]) -> Result<Self> {
        let total: usize = bits.iter().map(|&b| usize::from(b)).sum();
        if total != vals.len() || total > 256 {
            return Err(Error::Parse("inconsistent Huffman table".into()));
        }
        let mut dec = Self { mincode: [0; 17], maxcode: [-1; 17], valptr: [0; 17], vals: vals.to_vec() };
        let mut code = 0i32;
        let mut k = 0usize;
        for len in 1..=16 {
            let count = usize::from(bits[len - 1]);
            if count > 0 {
                dec.valptr[len] = k;
                dec.mincode[len] = code;
                code += count as i32;
                k += count;
                dec.maxcode[len] = code - 1;
                if code > (1 << len) {
                    return Err(Error::Parse("over-subscribed Huffman table".into()));
                }
            }
            code <<= 1;
        }
        Ok(dec)
    }

    fn decode(&self, reader: &mut BitReader) -> Result<u8> {
        let mut code = 0i32;
        for len in 1..=16 {
            code = (code << 1) | reader.bit()? as i32;
            if code <= self.maxcode[len] {
                return Ok(self.vals[self.valptr[len] + (code - self.mincode[len]) as usize]);
            }
        }
        Err(Error::Huffman("no code matches the bit sequence".into()))
    }
}

/// Reads from an already unstuffed scan.
struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
    bit: u32,
}

impl<'a> BitReader<'a> {
    fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0, bit: 0 }
    }

    fn bit(&mut self) -> Result<u32> {
        let byte = *self.data.get(self.pos).ok_or_else(|| Error::Truncation("scan data ended early".into()))?;
        let b = u32::from(byte >> (7 - self.bit)) & 1;
        self.bit += 1;
        if self.bit == 8 {
            self.bit = 0;
            self.pos += 1;
        }
        Ok(b)
    }

    fn bits(&mut self, n: u32) -> Result<u32> {
        let mut v = 0;
        for _ in 0..n {
            v = (v << 1) | self.bit()?;
        }
        Ok(v)
    }

    fn receive_extend(&mut self, cat: u32) -> Result<i32> {
        if cat == 0 {
            return Ok(0);
        }
        let v = self.bits(cat)? as i32;
        Ok(if v < 1 << (cat - 1) { v - (1 << cat) + 1 } else { v })
    }
}

struct Layout<'a> {
    width: usize,
    height: usize,
    quant: QuantTable,
    dc: HuffmanDecoder,
    ac: HuffmanDecoder,
    /// Stuffed entropy-coded bytes.
    scan: &'a [u8],
}

fn read_u16(bytes: &[u8], pos: usize) -> Result<u16> {
    match bytes.get(pos..pos + 2) {
        Some(s) => Ok(u16::from_be_bytes([s[0], s[1]])),
        None => Err(Error::Truncation(format!("stream ends inside a segment at byte {pos}"))),
    }
}

fn parse_layout(bytes: &[u8]) -> Result<Layout<'_>> {
    if bytes.len() < 2 || bytes[0] != 0xff || bytes[1] != SOI {
        return Err(Error::Parse("missing SOI marker".into()));
    }
    let mut pos = 2;
    let mut quant: [Option<QuantTable>; 4] = [None; 4];
    let mut dc_tables: [Option<HuffmanDecoder>; 4] = Default::default();
    let mut ac_tables: [Option<HuffmanDecoder>; 4] = Default::default();
    let mut frame: Option<(usize, usize, usize)> = None; // width, height, quant id

    loop {
        if pos >= bytes.len() {
            return Err(Error::Truncation("stream ends before the scan".into()));
        }
        if bytes[pos] != 0xff {
            return Err(Error::Parse(format!("expected a marker at byte {pos}")));
        }
        // fill bytes
        while bytes.get(pos + 1) == Some(&0xff) {
            pos += 1;
        }
        let marker = *bytes.get(pos + 1).ok_or_else(|| Error::Truncation("stream ends at a marker".into()))?;
        pos += 2;
        if marker == SOI || marker == EOI {
            return Err(Error::Parse(format!("unexpected marker {marker:#04x} before the scan")));
        }
        let len = usize::from(read_u16(bytes, pos)?);
        if len < 2 {
            return Err(Error::Parse(format!("segment length {len} too short")));
        }
        let payload = bytes
            .get(pos + 2..pos + len)
            .ok_or_else(|| Error::Truncation(format!("segment {marker:#04x} runs past the end")))?;
        pos += len;

        match marker {
            DQT => parse_dqt(payload, &mut quant)?,
            DHT => parse_dht(payload, &mut dc_tables, &mut ac_tables)?,
            SOF0 => frame = Some(parse_sof0(payload)?),
            0xc1..=0xcf if marker != DHT && marker != 0xc8 && marker != 0xcc => {
                return Err(Error::Parse(format!("unsupported frame type {marker:#04x}")));
            }
            DRI => {
                if payload.len() >= 2 && (payload[0] != 0 || payload[1] != 0) {
                    return Err(Error::Parse("restart intervals are not supported".into()));
                }
            }
            SOS => {
                let (dc_id, ac_id) = parse_sos(payload)?;
                let (width, height, q_id) = frame.ok_or_else(|| Error::Parse("SOS before SOF0".into()))?;
                let quant = quant[q_id].ok_or_else(|| Error::Parse(format!("quant table {q_id} missing")))?;
                let dc = dc_tables[dc_id].take().ok_or_else(|| Error::Parse(format!("DC table {dc_id} missing")))?;
                let ac = ac_tables[ac_id].take().ok_or_else(|| Error::Parse(format!("AC table {ac_id} missing")))?;
                let end = scan_end(bytes, pos);
                let scan = &bytes[pos..end];
                if end + 2 > bytes.len() {
                    return Err(Error::Truncation("missing EOI marker".into()));
                }
                if bytes[end + 1] != EOI {
                    return Err(Error::Parse(format!("expected EOI after the scan, found {:#04x}", bytes[end + 1])));
                }
                return Ok(Layout { width, height, quant, dc, ac, scan });
            }
            // APPn, COM and anything else with a length field is skipped
            _ => {}
        }
    }
}

fn parse_dqt(mut payload: &[u8], quant: &mut [Option<QuantTable>; 4]) -> Result<()> {
    while !payload.is_empty() {
        let pq = payload[0] >> 4;
        let tq = usize::from(payload[0] & 0x0f);
        if tq > 3 || pq > 1 {
            return Err(Error::Parse("bad DQT table spec".into()));
        }
        let size = if pq == 0 { 64 } else { 128 };
        let body = payload.get(1..1 + size).ok_or_else(|| Error::Parse("short DQT segment".into()))?;
        let mut entries = [0u16; BLOCK_LEN];
        for (k, &natural) in ZIGZAG.iter().enumerate() {
            entries[natural] =
                if pq == 0 { u16::from(body[k]) } else { u16::from_be_bytes([body[2 * k], body[2 * k + 1]]) };
        }
        quant[tq] = Some(QuantTable::new(entries).map_err(|_| Error::Parse("zero in DQT".into()))?);
        payload = &payload[1 + size..];
    }
    Ok(())
}

fn parse_dht(
    mut payload: &[u8],
    dc: &mut [Option<HuffmanDecoder>; 4],
    ac: &mut [Option<HuffmanDecoder>; 4],
) -> Result<()> {
    while !payload.is_empty() {
        if payload.len() < 17 {
            return Err(Error::Parse("short DHT segment".into()));
        }
        let class = payload[0] >> 4;
        let id = usize::from(payload[0] & 0x0f);
        if class > 1 || id > 3 {
            return Err(Error::Parse("bad DHT table spec".into()));
        }
        let bits: [u8; 16] = payload[1..17].try_into().expect("16 bytes");
        let n: usize = bits.iter().map(|&b| usize::from(b)).sum();
        let vals = payload.get(17..17 + n).ok_or_else(|| Error::Parse("short DHT values".into()))?;
        let table = HuffmanDecoder::new(&bits, vals)?;
        if class == 0 {
            dc[id] = Some(table);
        } else {
            ac[id] = Some(table);
        }
        payload = &payload[17 + n..];
    }
    Ok(())
}

fn parse_sof0(p: &[u8]) -> Result<(usize, usize, usize)> {
    if p.len() < 6 {
        return Err(Error::Parse("short SOF0 segment".into()));
    }
    if p[0] != 8 {
        return Err(Error::Parse(format!("sample precision {} unsupported", p[0])));
    }
    let height = usize::from(u16::from_be_bytes([p[1], p[2]]));
    let width = usize::from(u16::from_be_bytes([p[3], p[4]]));
    if p[5] != 1 || p.len() < 9 {
        return Err(Error::Parse(format!("{} components unsupported, expected 1", p[5])));
    }
    if width == 0 || height == 0 {
        return Err(Error::Parse("zero frame dimension".into()));
    }
    let q_id = usize::from(p[8]);
    if q_id > 3 {
        return Err(Error::Parse("bad quant table id".into()));
    }
    Ok((width, height, q_id))
}

fn parse_sos(p: &[u8]) -> Result<(usize, usize)> {
    if p.len() < 6 || p[0] != 1 {
        return Err(Error::Parse("SOS must reference exactly one component".into()));
    }
    if p[3] != 0 || p[4] != 63 || p[5] != 0 {
        return Err(Error::Parse("only sequential full-spectrum scans are supported".into()));
    }
    Ok((usize::from(p[2] >> 4), usize::from(p[2] & 0x0f)))
}

/// Index of the first marker (0xFF followed by anything but 0x00) at or after `start`.
fn scan_end(bytes: &[u8], start: usize) -> usize {
    let mut i = start;
    while i + 1 < bytes.len() {
        if bytes[i] == 0xff && bytes[i + 1] != 0x00 {
            return i;
        }
        i += 1;
    }
    bytes.len()
}

fn unstuff(scan: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(scan.len());
    let mut i = 0;
    while i < scan.len() {
        out.push(scan[i]);
        i += if scan[i] == 0xff { 2 } else { 1 };
    }
    out
}

/// Recovers the exact quantized coefficients and quant table.
pub fn decode_baseline(bytes: &[u8]) -> Result<CoeffGrid> {
    let layout = parse_layout(bytes)?;
    let mut grid = CoeffGrid::new(layout.width, layout.height, layout.quant)?;
    let data = unstuff(layout.scan);
    let mut reader = BitReader::new(&data);
    let mut prev_dc = 0i32;
    for block in grid.blocks_mut() {
        let cat = u32::from(layout.dc.decode(&mut reader)?);
        if cat > MAX_DC_CATEGORY {
            return Err(Error::Huffman(format!("DC category {cat} out of range")));
        }
        prev_dc += reader.receive_extend(cat)?;
        block.0[0] = prev_dc;
        let mut k = 1;
        while k < BLOCK_LEN {
            let rs = layout.ac.decode(&mut reader)?;
            let (run, cat) = (usize::from(rs >> 4), u32::from(rs & 0x0f));
            if cat == 0 {
                if run == 15 {
                    k += 16;
                    continue;
                }
                break;
            }
            k += run;
            if k >= BLOCK_LEN || cat > MAX_AC_CATEGORY {
                return Err(Error::Huffman(format!("AC run/size {rs:#04x} overflows the block")));
            }
            block.0[ZIGZAG[k]] = reader.receive_extend(cat)?;
            k += 1;
        }
        if k > BLOCK_LEN {
            return Err(Error::Huffman("zero run overflows the block".into()));
        }
    }
    Ok(grid)
}

/// Zeroes every DC except the four corner blocks'. AC terms are untouched.
pub fn drop_dc(grid: &CoeffGrid) -> CoeffGrid {
    let mut out = grid.clone();
    let (rows, cols) = (grid.block_rows(), grid.block_cols());
    for r in 0..rows {
        for c in 0..cols {
            let corner = (r == 0 || r == rows - 1) && (c == 0 || c == cols - 1);
            if !corner {
                out.block_mut(r, c).set_dc(0);
            }
        }
    }
    out
}

pub fn extract_corner_dcs(grid: &CoeffGrid) -> CornerDcs {
    let (last_r, last_c) = (grid.block_rows() - 1, grid.block_cols() - 1);
    CornerDcs {
        top_left: grid.dc(0, 0),
        top_right: grid.dc(0, last_c),
        bottom_left: grid.dc(last_r, 0),
        bottom_right: grid.dc(last_r, last_c),
    }
}

pub fn compression_ratio(original: &EncodedJpeg, dropped: &EncodedJpeg) -> CompressionRatio {
    CompressionRatio {
        total: dropped.total_len() as f64 / original.total_len() as f64,
        scan: if original.scan_len() == 0 { 1.0 } else { dropped.scan_len() as f64 / original.scan_len() as f64 },
    }
}
