//! A 10k-entry English wordlist fixture for the entropy detector's
//! false-positive measurement.
//!
//! Built from a few hundred common English words plus regular derived forms
//! and two-word compounds. Compounds matter: they are the entries long
//! enough (>= 20 chars) to even qualify as token candidates, while keeping
//! English letter statistics.

#![allow(dead_code)]

const BASE_WORDS: &[&str] = &[
    "about",
    "above",
    "absence",
    "account",
    "across",
    "action",
    "address",
    "advance",
    "advice",
    "affair",
    "afternoon",
    "against",
    "agency",
    "agreement",
    "airport",
    "almost",
    "already",
    "although",
    "always",
    "amount",
    "ancient",
    "animal",
    "announce",
    "another",
    "answer",
    "anything",
    "apartment",
    "appearance",
    "approach",
    "argument",
    "arrange",
    "arrival",
    "article",
    "artist",
    "assume",
    "attack",
    "attempt",
    "attention",
    "attitude",
    "audience",
    "author",
    "autumn",
    "average",
    "balance",
    "banana",
    "barrier",
    "battery",
    "beautiful",
    "because",
    "bedroom",
    "before",
    "begin",
    "behavior",
    "believe",
    "belong",
    "benefit",
    "between",
    "bicycle",
    "birthday",
    "biscuit",
    "borrow",
    "bottle",
    "bottom",
    "boundary",
    "branch",
    "breakfast",
    "bridge",
    "brief",
    "bright",
    "brother",
    "budget",
    "building",
    "business",
    "butter",
    "cabinet",
    "calendar",
    "camera",
    "campaign",
    "candidate",
    "capital",
    "captain",
    "careful",
    "carpet",
    "carriage",
    "carry",
    "castle",
    "casual",
    "catalog",
    "category",
    "cattle",
    "ceiling",
    "celebrate",
    "center",
    "central",
    "century",
    "ceremony",
    "certain",
    "chairman",
    "challenge",
    "chamber",
    "champion",
    "channel",
    "chapter",
    "character",
    "charge",
    "charity",
    "chicken",
    "children",
    "chimney",
    "chocolate",
    "choice",
    "church",
    "circle",
    "citizen",
    "classic",
    "climate",
    "clothes",
    "cluster",
    "coffee",
    "collect",
    "college",
    "comfort",
    "command",
    "comment",
    "commerce",
    "committee",
    "common",
    "company",
    "compare",
    "complete",
    "computer",
    "concern",
    "concert",
    "conclude",
    "condition",
    "conference",
    "confidence",
    "connect",
    "consider",
    "constant",
    "contact",
    "contain",
    "content",
    "contest",
    "context",
    "continue",
    "contract",
    "control",
    "convince",
    "cooking",
    "corner",
    "correct",
    "cottage",
    "cotton",
    "council",
    "country",
    "courage",
    "course",
    "cousin",
    "cover",
    "create",
    "creature",
    "credit",
    "cricket",
    "critical",
    "crowd",
    "culture",
    "curious",
    "current",
    "curtain",
    "custom",
    "customer",
    "damage",
    "danger",
    "daughter",
    "debate",
    "decade",
    "december",
    "decide",
    "decision",
    "declare",
    "decrease",
    "defense",
    "degree",
    "deliver",
    "demand",
    "density",
    "depend",
    "deposit",
    "describe",
    "desert",
    "design",
    "desire",
    "detail",
    "detect",
    "develop",
    "device",
    "dialog",
    "diamond",
    "difference",
    "difficult",
    "dinner",
    "direction",
    "discover",
    "discuss",
    "disease",
    "distance",
    "district",
    "divide",
    "doctor",
    "document",
    "domestic",
    "double",
    "dramatic",
    "drawing",
    "driver",
    "during",
    "dynamic",
    "early",
    "earth",
    "economy",
    "edition",
    "education",
    "effect",
    "effort",
    "eight",
    "either",
    "election",
    "electric",
    "element",
    "elephant",
    "emotion",
    "emphasis",
    "employ",
    "empty",
    "enable",
    "energy",
    "engine",
    "enough",
    "ensure",
    "enterprise",
    "entire",
    "entrance",
    "equation",
    "equipment",
    "escape",
    "especially",
    "estate",
    "estimate",
    "evening",
    "event",
    "evidence",
    "examine",
    "example",
    "excellent",
    "exchange",
    "exercise",
    "exhibit",
    "existence",
    "expect",
    "expense",
    "experience",
    "expert",
    "explain",
    "explore",
    "express",
    "extend",
    "extent",
    "external",
    "extreme",
    "factory",
    "faculty",
    "failure",
    "familiar",
    "family",
    "famous",
    "fashion",
    "feature",
    "federal",
    "feeling",
    "festival",
    "fiction",
    "fifteen",
    "figure",
    "finance",
    "finding",
    "finger",
    "finish",
    "fishing",
    "fitness",
    "flight",
    "flower",
    "follow",
    "football",
    "foreign",
    "forest",
    "forget",
    "formal",
    "format",
    "fortune",
    "forward",
    "foundation",
    "fourteen",
    "freedom",
    "frequent",
    "fresh",
    "friend",
    "front",
    "function",
    "furniture",
    "further",
    "future",
    "garden",
    "gather",
    "general",
    "generate",
    "gentle",
    "genuine",
    "glass",
    "global",
    "government",
    "gradual",
    "grammar",
    "grateful",
    "ground",
    "growth",
    "guarantee",
    "guardian",
    "guidance",
    "guitar",
    "habit",
    "handle",
    "happen",
    "harbor",
    "hardly",
    "health",
    "hearing",
    "heavy",
    "height",
    "helpful",
    "heritage",
    "highway",
    "history",
    "holiday",
    "hollow",
    "honest",
    "horizon",
    "hospital",
    "household",
    "however",
    "hundred",
    "hungry",
    "hunting",
    "husband",
    "identify",
    "illness",
    "imagine",
    "impact",
    "import",
    "important",
    "impression",
    "improve",
    "incident",
    "include",
    "income",
    "increase",
    "indeed",
    "independent",
    "index",
    "indicate",
    "industry",
    "initial",
    "injury",
    "inquiry",
    "insect",
    "inside",
    "insist",
    "install",
    "instance",
    "instead",
    "institute",
    "instrument",
    "insurance",
    "intend",
    "interest",
    "internal",
    "interval",
    "interview",
    "introduce",
    "invest",
    "investigate",
    "invite",
    "involve",
    "island",
    "journal",
    "journey",
    "judgment",
    "junior",
    "justice",
    "justify",
    "kitchen",
    "knowledge",
    "laboratory",
    "language",
    "largely",
    "launch",
    "lawyer",
    "leader",
    "league",
    "learning",
    "leather",
    "lecture",
    "legal",
    "leisure",
    "length",
    "lesson",
    "letter",
    "level",
    "liberal",
    "library",
    "license",
    "likely",
    "limited",
    "liquid",
    "listen",
    "literature",
    "little",
    "living",
    "local",
    "location",
    "machine",
    "magazine",
    "maintain",
    "majority",
    "manage",
    "manner",
    "manual",
    "margin",
    "market",
    "marriage",
    "master",
    "material",
    "matter",
    "maximum",
    "meaning",
    "measure",
    "mechanism",
    "medical",
    "medicine",
    "medium",
    "meeting",
    "member",
    "memory",
    "mental",
    "mention",
    "message",
    "method",
    "middle",
    "military",
    "million",
    "minister",
    "minority",
    "minute",
    "mirror",
    "mission",
    "mistake",
    "mixture",
    "moment",
    "monitor",
    "monthly",
    "morning",
    "mother",
    "motion",
    "mountain",
    "movement",
    "multiple",
    "muscle",
    "museum",
    "musical",
    "mystery",
    "narrow",
    "nation",
    "native",
    "natural",
    "nature",
    "nearly",
    "necessary",
    "negative",
    "neighbor",
    "neither",
    "nervous",
    "network",
    "never",
    "night",
    "nobody",
    "normal",
    "north",
    "nothing",
    "notice",
    "notion",
    "number",
    "object",
    "observe",
    "obtain",
    "obvious",
    "occasion",
    "occupy",
    "ocean",
    "offer",
    "office",
    "official",
    "often",
    "operate",
    "opinion",
    "opportunity",
    "oppose",
    "option",
    "orange",
    "order",
    "ordinary",
    "organize",
    "origin",
    "original",
    "other",
    "outcome",
    "output",
    "outside",
    "overall",
    "oxygen",
    "package",
    "painting",
    "palace",
    "paper",
    "parent",
    "parking",
    "partner",
    "passage",
    "passenger",
    "patient",
    "pattern",
    "payment",
    "peace",
    "people",
    "pepper",
    "percent",
    "perfect",
    "perform",
    "perhaps",
    "period",
    "permanent",
    "permission",
    "person",
    "phrase",
    "physical",
    "picture",
    "place",
    "planet",
    "planning",
    "plastic",
    "platform",
    "pleasant",
    "pleasure",
    "plenty",
    "pocket",
    "policy",
    "politics",
    "popular",
    "portion",
    "position",
    "positive",
    "possible",
    "potato",
    "potential",
    "powder",
    "power",
    "practical",
    "practice",
    "prayer",
    "precise",
    "predict",
    "prefer",
    "prepare",
    "presence",
    "present",
    "preserve",
    "pressure",
    "pretty",
    "prevent",
    "previous",
    "price",
    "primary",
    "prince",
    "principle",
    "priority",
    "prison",
    "private",
    "problem",
    "procedure",
    "process",
    "produce",
    "product",
    "profession",
    "profile",
    "profit",
    "program",
    "progress",
    "project",
    "promise",
    "promote",
    "proper",
    "property",
    "proportion",
    "propose",
    "protect",
    "protein",
    "protest",
    "provide",
    "public",
    "publish",
    "purchase",
    "purpose",
    "pursue",
    "quality",
    "quantity",
    "quarter",
    "question",
    "quickly",
    "quiet",
    "radio",
    "railway",
    "rather",
    "reaction",
    "reading",
    "reality",
    "realize",
    "reason",
    "recall",
    "receive",
    "recent",
    "recognize",
    "recommend",
    "record",
    "recover",
    "reduce",
    "refer",
    "reflect",
    "reform",
    "refuse",
    "regard",
    "region",
    "register",
    "regular",
    "relate",
    "relation",
    "relative",
    "release",
    "relevant",
    "relief",
    "religion",
    "remain",
    "remember",
    "remove",
    "repeat",
    "replace",
    "report",
    "represent",
    "request",
    "require",
    "research",
    "reserve",
    "resident",
    "resist",
    "resolve",
    "resource",
    "respect",
    "respond",
    "response",
    "restaurant",
    "result",
    "retain",
    "return",
    "reveal",
    "revenue",
    "review",
    "reward",
    "rhythm",
    "river",
    "romantic",
    "rough",
    "round",
    "routine",
    "rubber",
    "rural",
    "safety",
    "salary",
    "sample",
    "satisfy",
    "scale",
    "scheme",
    "school",
    "science",
    "screen",
    "search",
    "season",
    "second",
    "secret",
    "section",
    "sector",
    "secure",
    "select",
    "senior",
    "sentence",
    "separate",
    "sequence",
    "series",
    "serious",
    "servant",
    "service",
    "session",
    "settle",
    "seven",
    "several",
    "severe",
    "shadow",
    "share",
    "sharp",
    "shelter",
    "shopping",
    "short",
    "should",
    "shoulder",
    "sight",
    "signal",
    "silence",
    "silver",
    "similar",
    "simple",
    "single",
    "sister",
    "situation",
    "sixteen",
    "slight",
    "slowly",
    "small",
    "smart",
    "smooth",
    "social",
    "society",
    "soldier",
    "solution",
    "somebody",
    "somehow",
    "someone",
    "something",
    "sometimes",
    "somewhere",
    "sound",
    "source",
    "south",
    "speaker",
    "special",
    "species",
    "specific",
    "speech",
    "spend",
    "spirit",
    "sport",
    "spread",
    "spring",
    "square",
    "stable",
    "stage",
    "standard",
    "start",
    "statement",
    "station",
    "status",
    "steady",
    "still",
    "stomach",
    "storage",
    "store",
    "story",
    "straight",
    "strange",
    "strategy",
    "stream",
    "street",
    "strength",
    "stress",
    "stretch",
    "strike",
    "strong",
    "structure",
    "student",
    "studio",
    "study",
    "stuff",
    "subject",
    "substance",
    "succeed",
    "success",
    "sudden",
    "suffer",
    "suggest",
    "summer",
    "supply",
    "support",
    "suppose",
    "surface",
    "surgery",
    "surprise",
    "surround",
    "survey",
    "survive",
    "suspect",
    "sustain",
    "sweet",
    "switch",
    "symbol",
    "sympathy",
    "symptom",
    "system",
    "table",
    "talent",
    "target",
    "teacher",
    "technical",
    "technique",
    "technology",
    "telephone",
    "television",
    "temperature",
    "temple",
    "tendency",
    "tension",
    "terrible",
    "territory",
    "theater",
    "theme",
    "theory",
    "therapy",
    "therefore",
    "thirteen",
    "thirty",
    "thought",
    "thousand",
    "threat",
    "through",
    "ticket",
    "timber",
    "tissue",
    "together",
    "tomorrow",
    "tongue",
    "tonight",
    "topic",
    "total",
    "touch",
    "toward",
    "tradition",
    "traffic",
    "training",
    "transfer",
    "transition",
    "translate",
    "transport",
    "travel",
    "treasure",
    "treatment",
    "trial",
    "triangle",
    "trouble",
    "trust",
    "truth",
    "tunnel",
    "twelve",
    "twenty",
    "typical",
    "umbrella",
    "understand",
    "uniform",
    "union",
    "unique",
    "united",
    "universe",
    "unless",
    "until",
    "unusual",
    "upper",
    "urban",
    "useful",
    "usual",
    "vacation",
    "valley",
    "valuable",
    "value",
    "variety",
    "various",
    "vegetable",
    "vehicle",
    "venture",
    "version",
    "victim",
    "victory",
    "video",
    "village",
    "violence",
    "virtue",
    "visible",
    "vision",
    "visit",
    "visual",
    "vital",
    "volume",
    "voyage",
    "warning",
    "weather",
    "wedding",
    "weekend",
    "weight",
    "welcome",
    "welfare",
    "western",
    "whatever",
    "whether",
    "while",
    "whisper",
    "whole",
    "widely",
    "window",
    "winter",
    "wisdom",
    "within",
    "without",
    "witness",
    "wonder",
    "wooden",
    "worker",
    "worry",
    "worth",
    "writer",
    "writing",
    "yellow",
    "yesterday",
    "young",
    "yourself",
];

const SUFFIXES: &[&str] = &[
    "s", "ed", "ing", "er", "ly", "ness", "ful", "less", "ment", "able",
];

/// Exactly 10,000 distinct English and English-derived words.
pub fn english_wordlist_10k() -> Vec<String> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(10_000);
    let push =
        |word: String, out: &mut Vec<String>, seen: &mut std::collections::BTreeSet<String>| {
            if out.len() < 10_000 && seen.insert(word.clone()) {
                out.push(word);
            }
        };

    for w in BASE_WORDS {
        push(w.to_string(), &mut out, &mut seen);
    }
    for w in BASE_WORDS {
        for suffix in SUFFIXES {
            push(format!("{w}{suffix}"), &mut out, &mut seen);
        }
    }
    // Two-word compounds fill the rest; a rotating stride varies the pairs.
    let n = BASE_WORDS.len();
    let mut stride = 1;
    'outer: loop {
        for i in 0..n {
            let a = BASE_WORDS[i];
            let b = BASE_WORDS[(i + stride) % n];
            push(format!("{a}{b}"), &mut out, &mut seen);
            if out.len() == 10_000 {
                break 'outer;
            }
        }
        stride += 1;
        assert!(
            stride < n,
            "wordlist generator exhausted before reaching 10k"
        );
    }
    assert_eq!(out.len(), 10_000);
    out
}
