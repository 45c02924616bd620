//! Minimal ELF64 little-endian executable parser.
//!
//! Deliberately narrow: one rigorously handled class instead of four sloppy
//! ones. Everything else is reported as an unsupported variant so the caller
//! can count and skip it.

use thiserror::Error;

const ELF_MAGIC: [u8; 4] = [0x7F, 0x45, 0x4C, 0x46];
const SHT_SYMTAB: u32 = 2;
const SHT_STRTAB: u32 = 3;
const SHT_DYNSYM: u32 = 11;
const SHN_UNDEF: u16 = 0;
const STB_LOCAL: u8 = 0;
const EHDR_LEN: usize = 64;
const SHDR_LEN: usize = 64;
const SYM_LEN: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElfError {
    /// Wrong magic: the file is simply not ELF, skip it.
    #[error("not an ELF executable")]
    NotAnExecutable,
    /// Real ELF, but a class this parser does not support (32-bit or
    /// big-endian). Counted and reported, never parsed sloppily.
    #[error("unsupported ELF variant: {0}")]
    UnsupportedVariant(String),
    #[error("malformed ELF header: {0}")]
    MalformedHeader(String),
}

/// Facts about one executable, the carrier for the weak-import scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutableInfo {
    pub machine: u16,
    /// Undefined dynamic symbols with non-local binding: what the binary
    /// actually pulls in from elsewhere.
    pub imported_symbols: Vec<String>,
    /// Non-local symbols the binary itself defines.
    pub defined_symbols: Vec<String>,
    pub section_names: Vec<String>,
    /// True when no static symbol table is present.
    pub is_stripped: bool,
}

struct SectionHeader {
    name_off: u32,
    sh_type: u32,
    offset: u64,
    size: u64,
    link: u32,
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes(b[at..at + 2].try_into().unwrap())
}
fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().unwrap())
}
fn u64_at(b: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}

/// Parse a 64-bit little-endian ELF image.
pub fn parse_executable(bytes: &[u8]) -> Result<ExecutableInfo, ElfError> {
    if bytes.len() < 4 || bytes[..4] != ELF_MAGIC {
        return Err(ElfError::NotAnExecutable);
    }
    if bytes.len() < EHDR_LEN {
        return Err(ElfError::MalformedHeader(
            "file shorter than the ELF header".into(),
        ));
    }
    match (bytes[4], bytes[5]) {
        (2, 1) => {}
        (1, _) => return Err(ElfError::UnsupportedVariant("32-bit ELF".into())),
        (2, 2) => return Err(ElfError::UnsupportedVariant("big-endian ELF".into())),
        (c, d) => {
            return Err(ElfError::UnsupportedVariant(format!(
                "unknown class {c}/data {d} encoding"
            )));
        }
    }

    let machine = u16_at(bytes, 18);
    let shoff = u64_at(bytes, 40) as usize;
    let shentsize = u16_at(bytes, 58) as usize;
    let shnum = u16_at(bytes, 60) as usize;
    let shstrndx = u16_at(bytes, 62) as usize;

    if shnum == 0 {
        return Ok(ExecutableInfo {
            machine,
            imported_symbols: Vec::new(),
            defined_symbols: Vec::new(),
            section_names: Vec::new(),
            is_stripped: true,
        });
    }
    if shentsize < SHDR_LEN {
        return Err(ElfError::MalformedHeader(format!(
            "section header entry size {shentsize}"
        )));
    }
    let table_end = shoff
        .checked_add(
            shnum
                .checked_mul(shentsize)
                .ok_or_else(|| overflow("section table size"))?,
        )
        .ok_or_else(|| overflow("section table end"))?;
    if table_end > bytes.len() {
        return Err(ElfError::MalformedHeader(
            "section header table out of bounds".into(),
        ));
    }

    let mut sections = Vec::with_capacity(shnum);
    for i in 0..shnum {
        let at = shoff + i * shentsize;
        let h = &bytes[at..at + SHDR_LEN];
        sections.push(SectionHeader {
            name_off: u32_at(h, 0),
            sh_type: u32_at(h, 4),
            offset: u64_at(h, 24),
            size: u64_at(h, 32),
            link: u32_at(h, 40),
        });
    }

    let section_bytes = |s: &SectionHeader| -> Result<&[u8], ElfError> {
        let start = s.offset as usize;
        let end = start
            .checked_add(s.size as usize)
            .ok_or_else(|| overflow("section extent"))?;
        bytes
            .get(start..end)
            .ok_or_else(|| ElfError::MalformedHeader("section data out of bounds".into()))
    };

    if shstrndx >= sections.len() {
        return Err(ElfError::MalformedHeader("shstrndx out of range".into()));
    }
    let shstrtab = section_bytes(&sections[shstrndx])?;
    let mut section_names = Vec::new();
    for s in &sections {
        section_names.push(strtab_name(shstrtab, s.name_off as usize)?);
    }

    let mut imported = Vec::new();
    let mut defined = Vec::new();
    let mut has_symtab = false;
    for s in &sections {
        if s.sh_type != SHT_DYNSYM && s.sh_type != SHT_SYMTAB {
            continue;
        }
        if s.sh_type == SHT_SYMTAB {
            has_symtab = true;
        }
        let strtab_section = sections
            .get(s.link as usize)
            .ok_or_else(|| ElfError::MalformedHeader("symbol table link out of range".into()))?;
        if strtab_section.sh_type != SHT_STRTAB {
            return Err(ElfError::MalformedHeader(
                "symbol table links to a non-strtab section".into(),
            ));
        }
        let strtab = section_bytes(strtab_section)?;
        let data = section_bytes(s)?;
        for chunk in data.chunks_exact(SYM_LEN) {
            let name_off = u32_at(chunk, 0) as usize;
            let binding = chunk[4] >> 4;
            let shndx = u16_at(chunk, 6);
            if name_off == 0 || binding == STB_LOCAL {
                continue;
            }
            let name = strtab_name(strtab, name_off)?;
            if name.is_empty() {
                continue;
            }
            if shndx == SHN_UNDEF {
                if s.sh_type == SHT_DYNSYM {
                    imported.push(name);
                }
            } else {
                defined.push(name);
            }
        }
    }

    imported.sort();
    imported.dedup();
    defined.sort();
    defined.dedup();
    section_names.sort();
    section_names.dedup();

    Ok(ExecutableInfo {
        machine,
        imported_symbols: imported,
        defined_symbols: defined,
        section_names,
        is_stripped: !has_symtab,
    })
}

fn overflow(what: &str) -> ElfError {
    ElfError::MalformedHeader(format!("{what} overflows"))
}

fn strtab_name(strtab: &[u8], off: usize) -> Result<String, ElfError> {
    let rest = strtab
        .get(off..)
        .ok_or_else(|| ElfError::MalformedHeader("string table offset out of bounds".into()))?;
    let nul = rest
        .iter()
        .position(|&b| b == 0)
        .ok_or_else(|| ElfError::MalformedHeader("unterminated string table entry".into()))?;
    Ok(String::from_utf8_lossy(&rest[..nul]).into_owned())
}
