//! Hand-assembled minimal ELF64 little-endian images for parser tests.
//!
//! The layout is the smallest thing a symbol-table consumer will accept:
//! header, .dynstr, .dynsym, optional .strtab/.symtab, .shstrtab, then the
//! section header table.

#![allow(dead_code)]

const SYM_LEN: usize = 24;
const SHDR_LEN: usize = 64;

pub struct ElfFixture {
    imports: Vec<String>,
    defines: Vec<String>,
    statics: Option<Vec<String>>,
    machine: u16,
}

impl Default for ElfFixture {
    fn default() -> Self {
        Self::new()
    }
}

impl ElfFixture {
    pub fn new() -> Self {
        Self {
            imports: Vec::new(),
            defines: Vec::new(),
            statics: None,
            machine: 0x3E,
        }
    }

    /// Symbols the binary pulls in: undefined, GLOBAL, in .dynsym.
    pub fn imports(mut self, names: &[&str]) -> Self {
        self.imports = names.iter().map(|s| s.to_string()).collect();
        self
    }

    /// Symbols the binary itself provides: defined, GLOBAL, in .dynsym.
    pub fn defines(mut self, names: &[&str]) -> Self {
        self.defines = names.iter().map(|s| s.to_string()).collect();
        self
    }

    /// Add a static .symtab with these defined symbols (marks the binary
    /// as not stripped).
    pub fn static_symtab(mut self, names: &[&str]) -> Self {
        self.statics = Some(names.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn machine(mut self, machine: u16) -> Self {
        self.machine = machine;
        self
    }

    pub fn build(self) -> Vec<u8> {
        let (dynstr, dyn_offsets) = build_strtab(self.imports.iter().chain(self.defines.iter()));
        let mut dynsym = vec![0u8; SYM_LEN]; // index 0: null symbol
        for (i, _) in self.imports.iter().enumerate() {
            dynsym.extend_from_slice(&symbol(dyn_offsets[i], 1, 0)); // GLOBAL, SHN_UNDEF
        }
        for (j, _) in self.defines.iter().enumerate() {
            dynsym.extend_from_slice(&symbol(dyn_offsets[self.imports.len() + j], 1, 2));
        }

        let (strtab, symtab) = match &self.statics {
            Some(names) => {
                let (st, offsets) = build_strtab(names.iter());
                let mut tab = vec![0u8; SYM_LEN];
                for off in offsets {
                    tab.extend_from_slice(&symbol(off, 1, 2));
                }
                (st, tab)
            }
            None => (Vec::new(), Vec::new()),
        };

        let mut shstrtab = vec![0u8];
        let name_dynsym = push_name(&mut shstrtab, ".dynsym");
        let name_dynstr = push_name(&mut shstrtab, ".dynstr");
        let name_shstrtab = push_name(&mut shstrtab, ".shstrtab");
        let (name_symtab, name_strtab) = if self.statics.is_some() {
            (
                push_name(&mut shstrtab, ".symtab"),
                push_name(&mut shstrtab, ".strtab"),
            )
        } else {
            (0, 0)
        };

        let mut image = vec![0u8; 64];
        let dynstr_off = append(&mut image, &dynstr);
        let dynsym_off = append(&mut image, &dynsym);
        let strtab_off = append(&mut image, &strtab);
        let symtab_off = append(&mut image, &symtab);
        let shstrtab_off = append(&mut image, &shstrtab);
        let shoff = image.len();

        let shnum: u16 = if self.statics.is_some() { 6 } else { 4 };
        let mut headers = vec![0u8; SHDR_LEN]; // index 0: SHN_UNDEF null section
        headers.extend_from_slice(&shdr(name_dynsym, 11, dynsym_off, dynsym.len(), 2)); // .dynsym -> .dynstr
        headers.extend_from_slice(&shdr(name_dynstr, 3, dynstr_off, dynstr.len(), 0));
        headers.extend_from_slice(&shdr(name_shstrtab, 3, shstrtab_off, shstrtab.len(), 0));
        if self.statics.is_some() {
            headers.extend_from_slice(&shdr(name_symtab, 2, symtab_off, symtab.len(), 5)); // .symtab -> .strtab
            headers.extend_from_slice(&shdr(name_strtab, 3, strtab_off, strtab.len(), 0));
        }
        image.extend_from_slice(&headers);

        // ELF header
        image[0..4].copy_from_slice(&[0x7F, b'E', b'L', b'F']);
        image[4] = 2; // 64-bit
        image[5] = 1; // little-endian
        image[6] = 1; // version
        image[16..18].copy_from_slice(&2u16.to_le_bytes()); // ET_EXEC
        image[18..20].copy_from_slice(&self.machine.to_le_bytes());
        image[20..24].copy_from_slice(&1u32.to_le_bytes());
        image[40..48].copy_from_slice(&(shoff as u64).to_le_bytes());
        image[52..54].copy_from_slice(&64u16.to_le_bytes());
        image[58..60].copy_from_slice(&(SHDR_LEN as u16).to_le_bytes());
        image[60..62].copy_from_slice(&shnum.to_le_bytes());
        image[62..64].copy_from_slice(&3u16.to_le_bytes()); // .shstrtab index

        image
    }
}

fn build_strtab<'a>(names: impl Iterator<Item = &'a String>) -> (Vec<u8>, Vec<u32>) {
    let mut table = vec![0u8];
    let mut offsets = Vec::new();
    for name in names {
        offsets.push(table.len() as u32);
        table.extend_from_slice(name.as_bytes());
        table.push(0);
    }
    (table, offsets)
}

fn push_name(shstrtab: &mut Vec<u8>, name: &str) -> u32 {
    let off = shstrtab.len() as u32;
    shstrtab.extend_from_slice(name.as_bytes());
    shstrtab.push(0);
    off
}

fn append(image: &mut Vec<u8>, data: &[u8]) -> usize {
    let off = image.len();
    image.extend_from_slice(data);
    off
}

fn symbol(name_off: u32, binding: u8, shndx: u16) -> [u8; SYM_LEN] {
    let mut s = [0u8; SYM_LEN];
    s[0..4].copy_from_slice(&name_off.to_le_bytes());
    s[4] = binding << 4; // type STT_NOTYPE
    s[6..8].copy_from_slice(&shndx.to_le_bytes());
    s
}

fn shdr(name_off: u32, sh_type: u32, offset: usize, size: usize, link: u32) -> [u8; SHDR_LEN] {
    let mut h = [0u8; SHDR_LEN];
    h[0..4].copy_from_slice(&name_off.to_le_bytes());
    h[4..8].copy_from_slice(&sh_type.to_le_bytes());
    h[24..32].copy_from_slice(&(offset as u64).to_le_bytes());
    h[32..40].copy_from_slice(&(size as u64).to_le_bytes());
    h[40..44].copy_from_slice(&link.to_le_bytes());
    h[56..64].copy_from_slice(&(SYM_LEN as u64).to_le_bytes());
    h
}
