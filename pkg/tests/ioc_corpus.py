"""Curated IOC fixture corpus: positives and hard negatives for all 23 types.

Each case pins the exact set of (type, refanged value) pairs the extractor
must return for its text, so the suite checks precision and recall at once.
Hash values are real digests computed with hashlib; bitcoin positives carry
valid checksums (well-known addresses plus fixtures minted with the public
base58check/bech32 algorithms).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass


@dataclass(frozen=True)
class IocCase:
    target: str
    kind: str  # "positive" | "negative"
    text: str
    expected: tuple[tuple[str, str], ...]


def _md5(i: int) -> str:
    return hashlib.md5(f"ctix-md5-{i}".encode()).hexdigest()


def _sha1(i: int) -> str:
    return hashlib.sha1(f"ctix-sha1-{i}".encode()).hexdigest()


def _sha256(i: int) -> str:
    return hashlib.sha256(f"ctix-sha256-{i}".encode()).hexdigest()


def _sha512(i: int) -> str:
    return hashlib.sha512(f"ctix-sha512-{i}".encode()).hexdigest()


_B58_ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"


def _base58_run(seed: int, length: int) -> str:
    out = []
    state = seed or 1
    for _ in range(length):
        state = (state * 48271 + 11) % 2147483647
        out.append(_B58_ALPHABET[state % 58])
    return "".join(out)


def _monero(seed: int, prefix: str = "4", length: int = 95) -> str:
    return prefix + _base58_run(seed, length - 1)


def _case(target, kind, text, expected):
    return IocCase(target, kind, text, tuple(expected))


def _pos(target, text, value, ioc_type=None):
    return _case(target, "positive", text, [(ioc_type or target, value)])


def _neg(target, text, expected=()):
    return _case(target, "negative", text, expected)


def build_cases() -> list[IocCase]:
    cases: list[IocCase] = []
    md5s = [_md5(i) for i in range(12)]
    sha1s = [_sha1(i) for i in range(8)]
    sha256s = [_sha256(i) for i in range(8)]
    sha512s = [_sha512(i) for i in range(8)]

    # ATTACK_TACTICS_ENTERPRISE
    t = "ATTACK_TACTICS_ENTERPRISE"
    cases += [
        _pos(t, "Analysts aligned the activity with tactic TA0002 during triage.", "TA0002"),
        _pos(t, "Initial access is catalogued as TA0001 in the enterprise matrix.", "TA0001"),
        _pos(t, "Persistence corresponds to TA0003 across the fleet.", "TA0003"),
        _pos(t, "The report tags lateral movement as TA0008.", "TA0008"),
        _pos(t, "Exfiltration behaviour is tracked under TA0010.", "TA0010"),
        _neg(t, "The tracking id TA123 is unrelated."),
        _neg(t, "Order TA00012 shipped yesterday."),
        _neg(t, "DELTA0001 is a flight number."),
        _neg(t, "The tactic id TA-0004 has a stray dash."),
        _neg(t, "Tactics overview without identifiers."),
    ]

    # ATTACK_TACTICS_MOBILE
    t = "ATTACK_TACTICS_MOBILE"
    cases += [
        _pos(t, "The mobile intrusion matrix lists TA0027 for initial access.", "TA0027"),
        _pos(t, "Within the mobile matrix, persistence is TA0028.", "TA0028"),
        _pos(t, "Mobile operators tagged the behaviour TA0029.", "TA0029"),
        _pos(t, "For Android implants the mobile tactic TA0033 applies.", "TA0033"),
        _pos(t, "The mobile kill chain ends with impact, TA0034.", "TA0034"),
        _neg(t, "Tactic TA0027 appears without platform context.",
             [("ATTACK_TACTICS_ENTERPRISE", "TA0027")]),
        _neg(t, "The mobile team filed ticket TA123."),
        _neg(t, "Mobile report MTA0027M is malformed."),
        _neg(t, "A mobile advisory mentioned TA00."),
        _neg(t, "Mobile device management rollout notes."),
    ]

    # ATTACK_TECHNIQUES_ENTERPRISE
    t = "ATTACK_TECHNIQUES_ENTERPRISE"
    cases += [
        _pos(t, "Scripting abuse consistent with T1059 was observed.", "T1059"),
        _pos(t, "PowerShell activity maps to T1059.001 on several hosts.", "T1059.001"),
        _pos(t, "The actor used T1566.002 for initial access.", "T1566.002"),
        _pos(t, "Data encryption for impact matches T1486.", "T1486"),
        _pos(t, "Credential dumping aligns with T1003.", "T1003"),
        _neg(t, "Ticket T105 lacks a digit."),
        _neg(t, "Model T10590 is a printer."),
        _neg(t, "CT1059 is a catalogue number."),
        _neg(t, "The technique T-1059 contains a dash."),
        _neg(t, "Generic enterprise techniques discussion."),
    ]

    # ATTACK_TECHNIQUES_MOBILE
    t = "ATTACK_TECHNIQUES_MOBILE"
    cases += [
        _pos(t, "The mobile implant exploits T1398 to patch the boot image.", "T1398"),
        _pos(t, "On Android, the mobile technique T1636.003 harvests SMS data.", "T1636.003"),
        _pos(t, "Mobile spyware executed T1417 keylogging.", "T1417"),
        _pos(t, "The mobile chain continued with T1646 exfiltration.", "T1646"),
        _pos(t, "Mobile analysts confirmed T1429 microphone capture.", "T1429"),
        _neg(t, "Technique T1398 appeared in the server report.",
             [("ATTACK_TECHNIQUES_ENTERPRISE", "T1398")]),
        _neg(t, "The mobile build T139 is unversioned."),
        _neg(t, "Mobile firmware XT1398 is a model number."),
        _neg(t, "Mobile release T13980 rolled out."),
        _neg(t, "Mobile threat landscape overview."),
    ]

    # BITCOIN_ADDRESSES
    t = "BITCOIN_ADDRESSES"
    cases += [
        _pos(t, "Ransom was paid to 1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa yesterday.",
             "1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa"),
        _pos(t, "Wallet 1BvBMSEYstWetqTFn5Au4m4GFg7xJaNVN2 received funds.",
             "1BvBMSEYstWetqTFn5Au4m4GFg7xJaNVN2"),
        _pos(t, "Deposits flowed to 3HpB1eCDpzULjUMNmPy7gxtxHCMELpNsQN overnight.",
             "3HpB1eCDpzULjUMNmPy7gxtxHCMELpNsQN"),
        _pos(t, "Payout address 1JNdCvdYw68qNPgf9u82MN4Vqr7CXLTXmJ rotated.",
             "1JNdCvdYw68qNPgf9u82MN4Vqr7CXLTXmJ"),
        _pos(t, "Victims paid bc1qw508d6qejxtdg4y5r3zarvary0c5xw7kv8f3t4 in segwit.",
             "bc1qw508d6qejxtdg4y5r3zarvary0c5xw7kv8f3t4"),
        _pos(t, "A second wallet bc1q264kzz66h7gzakg7hd45wx9km0gmtfdmh9d6qvn90zcqzn3hecds7zrwlx appeared.",
             "bc1q264kzz66h7gzakg7hd45wx9km0gmtfdmh9d6qvn90zcqzn3hecds7zrwlx"),
        _neg(t, "Address 1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNb has a bad checksum."),
        _neg(t, "String 1BvBMSEYstWetqTFn5Au4m4GFg7xJaNVN3 fails validation."),
        _neg(t, "Code bc1qw508d6qejxtdg4y5r3zarvary0c5xw7kv8f3t5 is corrupted."),
        _neg(t, "Shortened 1Shrt is not an address."),
        _neg(t, "The identifier 1lO0Il0O contains illegal symbols."),
    ]

    # CVES
    t = "CVES"
    cases += [
        _pos(t, "The exploit chain used CVE-2021-44228 against exposed services.", "CVE-2021-44228"),
        _pos(t, "Patching CVE-2017-0144 stops the SMB vector.", "CVE-2017-0144"),
        _pos(t, "A proof of concept for CVE-2023-23397 circulated quickly.", "CVE-2023-23397"),
        _pos(t, "Legacy systems remain exposed to CVE-2014-0160.", "CVE-2014-0160"),
        _pos(t, "Lowercase cve-2019-0708 still matches and is canonicalized.", "CVE-2019-0708"),
        _neg(t, "Identifier CVE-21-44228 uses a two digit year."),
        _neg(t, "Reference CVE-2021-123 is too short."),
        _neg(t, "Code CVE202144228 lacks hyphens."),
        _neg(t, "XCVE-2021-44228 is mangled."),
        _neg(t, "The cve database was refreshed."),
    ]

    # DOMAINS
    t = "DOMAINS"
    cases += [
        _pos(t, "Beaconing to evil-domain.com persisted for weeks.", "evil-domain.com"),
        _pos(t, "The dropper resolved update-check[.]example[.]com at runtime.",
             "update-check.example.com"),
        _pos(t, "Traffic to files.badhost.org spiked.", "files.badhost.org"),
        _pos(t, "A lookalike of corp.example.co registered recently.", "corp.example.co"),
        _pos(t, "Infrastructure at cdn(.)mirror(.)net rotated daily.", "cdn.mirror.net"),
        _neg(t, "The loader kernel32.dll exports functions."),
        _neg(t, "Run setup.exe to install."),
        _neg(t, "Open README.txt for details."),
        _neg(t, "Version string 1.2.3beta is numeric."),
        _neg(t, "The archive backup.tgz2 uploaded."),
    ]

    # EMAIL_ADDRESSES
    t = "EMAIL_ADDRESSES"
    cases += [
        _pos(t, "Phishing mail came from alice@evil-domain.com with an archive.",
             "alice@evil-domain.com"),
        _pos(t, "Contact bob.smith[at]example[.]org for the full report.",
             "bob.smith@example.org"),
        _pos(t, "The lure used carol+promo@mailer.example.net as sender.",
             "carol+promo@mailer.example.net"),
        _pos(t, "Replies went to dave_ops@badhost.org mailboxes.", "dave_ops@badhost.org"),
        _pos(t, "Credentials were sent to harvest[@]collector[.]co stealthily.",
             "harvest@collector.co"),
        _neg(t, "The handle @username is a social account."),
        _neg(t, "Write to postmaster@ for routing."),
        _neg(t, "An address like user@internal lacks a dot."),
        _neg(t, "Malformed pair..@..com raised errors."),
        _neg(t, "The string name_at_example_dot_com is spelled out."),
    ]

    # FILE_PATHS
    t = "FILE_PATHS"
    cases += [
        _pos(t, r"The payload wrote C:\Windows\Temp\svc.exe on disk.",
             r"C:\Windows\Temp\svc.exe"),
        _pos(t, r"Persistence used %APPDATA%\updater\run.bat for restarts.",
             r"%APPDATA%\updater\run.bat"),
        _pos(t, "Logs landed in /var/log/evil.log on the host.", "/var/log/evil.log"),
        _pos(t, "The implant read /etc/passwd during recon.", "/etc/passwd"),
        _pos(t, r"Staging occurred under \\fileshare\drop\stage.bin nightly.",
             r"\\fileshare\drop\stage.bin"),
        _neg(t, r"The folder Windows\System32 lacks a drive."),
        _neg(t, "Mount point usr/local/bin is relative."),
        _neg(t, "Drive C: alone is not a path."),
        _neg(t, "Root /unknownroot/files is unanchored."),
        _neg(t, r"Variable %OPEN\path is unterminated."),
    ]

    # IMPHASHES
    t = "IMPHASHES"
    cases += [
        _pos(t, f"The sample imphash {md5s[5]} matched earlier builds.", md5s[5]),
        _pos(t, f"PE metadata imphash: {md5s[6]} was indexed.", md5s[6]),
        _pos(t, f"Imphash = {md5s[7]} links the droppers.", md5s[7]),
        _pos(t, f"imphash={md5s[8]} appeared twice.", md5s[8]),
        _pos(t, f"The IMPHASH - {md5s[9]} - is rare.", md5s[9]),
        _neg(t, f"A bare hash {md5s[10]} has no keyword.", [("MD5S", md5s[10])]),
        _neg(t, f"The imphash field was empty near {sha1s[5]}.", [("SHA1S", sha1s[5])]),
        _neg(t, "imphash: not-a-hash-value recorded."),
        _neg(t, f"imphash {md5s[11][:31]} truncated."),
        _neg(t, f"importhash {md5s[11]} is a different tool.", [("MD5S", md5s[11])]),
    ]

    # IPV4S
    t = "IPV4S"
    cases += [
        _pos(t, "The C2 listened on 203.0.113.7 throughout.", "203.0.113.7"),
        _pos(t, "Secondary node 198.51.100.23 rotated weekly.", "198.51.100.23"),
        _pos(t, "Defanged peer 192[.]0[.]2[.]55 decoded cleanly.", "192.0.2.55"),
        _pos(t, "Internal pivot 10.8.0.1 was abused.", "10.8.0.1"),
        _pos(t, "Scanner hit 8.8.8.8 repeatedly.", "8.8.8.8"),
        _neg(t, "Version 1.2.3 is not an address."),
        _neg(t, "The range 999.1.1.1 is invalid."),
        _neg(t, "Sequence 1.2.3.4.5 overflows."),
        _neg(t, "Netmask 256.0.0.1 exceeds bounds."),
        _neg(t, "Build 10.20.30 shipped."),
    ]

    # IPV4_CIDRS
    t = "IPV4_CIDRS"
    cases += [
        _pos(t, "Block 198.51.100.0/24 was sinkholed.", "198.51.100.0/24"),
        _pos(t, "The botnet spanned 203.0.113.0/25 addresses.", "203.0.113.0/25"),
        _pos(t, "Traffic from 10.0.0.0/8 was filtered.", "10.0.0.0/8"),
        _pos(t, "Scans covered 192.0.2.128/30 precisely.", "192.0.2.128/30"),
        _pos(t, "A defanged net 172[.]16[.]0[.]0/12 appeared.", "172.16.0.0/12"),
        _neg(t, "Prefix 10.0.0.0/33 is illegal.", [("IPV4S", "10.0.0.0")]),
        _neg(t, "The slash in 1.2.3/24 is premature."),
        _neg(t, "Range 300.1.1.0/24 is bogus."),
        _neg(t, "Notation 10.0.0.0/ misses bits.", [("IPV4S", "10.0.0.0")]),
        _neg(t, "A bare /24 means nothing."),
    ]

    # MAC_ADDRESSES
    t = "MAC_ADDRESSES"
    cases += [
        _pos(t, "NIC 00:1A:2B:3C:4D:5E appeared in DHCP logs.", "00:1A:2B:3C:4D:5E"),
        _pos(t, "The rogue AP used AA:BB:CC:DD:EE:FF consistently.", "AA:BB:CC:DD:EE:FF"),
        _pos(t, "Adapter 00-14-22-01-23-45 was spoofed.", "00-14-22-01-23-45"),
        _pos(t, "Capture shows de:ad:be:ef:00:01 probing.", "de:ad:be:ef:00:01"),
        _pos(t, "Source fe:dc:ba:98:76:54 flooded ARP.", "fe:dc:ba:98:76:54"),
        _neg(t, "Short 00:1A:2B:3C:4D truncates."),
        _neg(t, "Long 00:11:22:33:44:55:66 overruns."),
        _neg(t, "Mixed 00-11:22-33:44-55 separators differ."),
        _neg(t, "Tokens 0:1:2:3:4:5 are too narrow."),
        _neg(t, "GG:HH:II:JJ:KK:LL is not hexadecimal."),
    ]

    # MD5S
    t = "MD5S"
    cases += [
        _pos(t, f"The dropper hash {md5s[0]} was flagged.", md5s[0]),
        _pos(t, f"Earlier builds used {md5s[1]} instead.", md5s[1]),
        _pos(t, f"Uppercase digest {md5s[2].upper()} also counts.", md5s[2].upper()),
        _pos(t, f"Sandbox detonation produced {md5s[3]} again.", md5s[3]),
        _pos(t, f"Blocklists now include {md5s[4]} everywhere.", md5s[4]),
        _neg(t, f"Truncated {md5s[0][:31]} misses a digit."),
        _neg(t, f"Padded {md5s[1]}a overruns."),
        _neg(t, f"String {md5s[2][:16]}zz{md5s[2][16:30]} mixes letters."),
        _neg(t, f"Short prefix {md5s[3][:20]} only."),
        _neg(t, "A hash-like word deadbeef is too short."),
    ]

    # MONERO_ADDRESSES
    t = "MONERO_ADDRESSES"
    xmrs = [_monero(1), _monero(2), _monero(3), _monero(4, prefix="8"), _monero(5)]
    cases += [
        _pos(t, f"Monero ransom went to {xmrs[0]} within hours.", xmrs[0]),
        _pos(t, f"The miner paid out to {xmrs[1]} weekly.", xmrs[1]),
        _pos(t, f"Wallet {xmrs[2]} collected extortion fees.", xmrs[2]),
        _pos(t, f"A subaddress {xmrs[3]} was also seen.", xmrs[3]),
        _pos(t, f"Funds consolidated into {xmrs[4]} later.", xmrs[4]),
        _neg(t, f"Truncated {_monero(6)[:94]} is short."),
        _neg(t, f"Padded {_monero(7)}z runs long."),
        _neg(t, f"Prefix 5{_base58_run(8, 94)} is unknown."),
        _neg(t, f"Broken {_monero(9)[:47]}0{_base58_run(10, 47)} has a zero."),
        _neg(t, f"Split {_monero(11)[:50]}-{_base58_run(12, 44)} is delimited."),
    ]

    # REGISTRY_KEY_PATHS
    t = "REGISTRY_KEY_PATHS"
    cases += [
        _pos(t, r"Autorun at HKLM\Software\Microsoft\Windows\CurrentVersion\Run persisted.",
             r"HKLM\Software\Microsoft\Windows\CurrentVersion\Run"),
        _pos(t, r"The key HKEY_CURRENT_USER\Software\Classes\exefile was altered.",
             r"HKEY_CURRENT_USER\Software\Classes\exefile"),
        _pos(t, r"Policies under HKCU\Environment\UserInitMprLogonScript changed.",
             r"HKCU\Environment\UserInitMprLogonScript"),
        _pos(t, r"Service config HKEY_LOCAL_MACHINE\SYSTEM\CurrentControlSet\Services\evilsvc appeared.",
             r"HKEY_LOCAL_MACHINE\SYSTEM\CurrentControlSet\Services\evilsvc"),
        _pos(t, r"Hive path HKU\S-1-5-21-444\Software\Run was modified.",
             r"HKU\S-1-5-21-444\Software\Run"),
        _neg(t, "The hive HKLM alone is not a key."),
        _neg(t, r"Prefix KLM\Software is unknown."),
        _neg(t, r"HKEY_FUTURE\Key does not exist."),
        _neg(t, "A registry discussion without paths."),
        _neg(t, r"HKLM\ trailing slash only."),
    ]

    # SHA1S
    t = "SHA1S"
    cases += [
        _pos(t, f"The loader digest {sha1s[0]} recurred.", sha1s[0]),
        _pos(t, f"Signed binary {sha1s[1]} was revoked.", sha1s[1]),
        _pos(t, f"Uppercase {sha1s[2].upper()} matches too.", sha1s[2].upper()),
        _pos(t, f"Artifact {sha1s[3]} seen in memory.", sha1s[3]),
        _pos(t, f"The tool reports {sha1s[4]} for the module.", sha1s[4]),
        _neg(t, f"Short {sha1s[0][:39]} misses one."),
        _neg(t, f"Long {sha1s[1]}0 overruns."),
        _neg(t, f"Mixed {sha1s[2][:20]}xx{sha1s[2][22:40]} breaks hex."),
        _neg(t, f"Prefix {sha1s[3][:25]} truncated."),
        _neg(t, "Forty characters of prose are not a digest."),
    ]

    # SHA256S
    t = "SHA256S"
    cases += [
        _pos(t, f"Payload checksum {sha256s[0]} distributed widely.", sha256s[0]),
        _pos(t, f"The archive hashed to {sha256s[1]} at rest.", sha256s[1]),
        _pos(t, f"Uppercase form {sha256s[2].upper()} is equivalent.", sha256s[2].upper()),
        _pos(t, f"Second stage {sha256s[3]} fetched later.", sha256s[3]),
        _pos(t, f"Config blob {sha256s[4]} decrypted in memory.", sha256s[4]),
        _neg(t, f"Missing tail {sha256s[0][:63]} fails."),
        _neg(t, f"Appended {sha256s[1]}f runs over."),
        _neg(t, f"Damaged {sha256s[2][:30]}qq{sha256s[2][32:64]} mixes letters."),
        _neg(t, f"Half {sha256s[3][:32]} is an MD5 length.", [("MD5S", sha256s[3][:32])]),
        _neg(t, "No digest text in this sentence."),
    ]

    # SHA512S
    t = "SHA512S"
    cases += [
        _pos(t, f"Archive digest {sha512s[0]} recorded.", sha512s[0]),
        _pos(t, f"The installer hashed to {sha512s[1]} exactly.", sha512s[1]),
        _pos(t, f"Uppercase {sha512s[2].upper()} is accepted.", sha512s[2].upper()),
        _pos(t, f"Firmware image {sha512s[3]} verified.", sha512s[3]),
        _pos(t, f"Dump file {sha512s[4]} catalogued.", sha512s[4]),
        _neg(t, f"Clipped {sha512s[0][:127]} short one."),
        _neg(t, f"Overlong {sha512s[1]}9 by one."),
        _neg(t, f"Corrupt {sha512s[2][:60]}zz{sha512s[2][62:128]} letters."),
        _neg(t, f"Quarter {sha512s[3][:32]} is an MD5 length.", [("MD5S", sha512s[3][:32])]),
        _neg(t, "Plain words only here."),
    ]

    # SSDEEPS
    t = "SSDEEPS"
    cases += [
        _pos(t, "Fuzzy hash 3072:MdTFCCrG4AMuyQYtJSD:MZCrG4yNJS matched prior samples.",
             "3072:MdTFCCrG4AMuyQYtJSD:MZCrG4yNJS"),
        _pos(t, "Sample ssdeep 96:aBcDeF12+gHi:jKl9m recorded.", "96:aBcDeF12+gHi:jKl9m"),
        _pos(t, "Cluster key 12288:yCgrQ+hHlLvJ:yCQmLvJ grouped five samples.",
             "12288:yCgrQ+hHlLvJ:yCQmLvJ"),
        _pos(t, "Similarity 1536:abcd4EFGh:ijKL held.", "1536:abcd4EFGh:ijKL"),
        _pos(t, "Small file 24:ZxYwVu:TsRq indexed.", "24:ZxYwVu:TsRq"),
        _neg(t, "Timestamp 12:30:45 is a clock."),
        _neg(t, "The ratio 12:345:678 is numeric."),
        _neg(t, "Label abc:def:ghi has no blocksize."),
        _neg(t, "Pair 96:aB:cD is too short."),
        _neg(t, "A ssdeep discussion without values."),
    ]

    # TLP_LABELS
    t = "TLP_LABELS"
    cases += [
        _pos(t, "This advisory is marked TLP:AMBER for distribution.", "TLP:AMBER"),
        _pos(t, "Shared under TLP:RED handling rules.", "TLP:RED"),
        _pos(t, "The bulletin carries TLP GREEN markings.", "TLP:GREEN"),
        _pos(t, "Release notes are TLP:CLEAR now.", "TLP:CLEAR"),
        _pos(t, "Previous versions used TLP:WHITE instead.", "TLP:WHITE"),
        _pos(t, "The restricted annex marked TLP:AMBER+STRICT applies.", "TLP:AMBER+STRICT"),
        _neg(t, "Color TLP:PURPLE is not defined."),
        _neg(t, "The word TLPRED runs together."),
        _neg(t, "A TLP overview document."),
        _neg(t, "Code TLP:REDLINE is a product."),
        _neg(t, "Marking TLP : BLUE is invalid."),
    ]

    # URLS
    t = "URLS"
    cases += [
        _pos(t, "visit hxxp://evil[.]com/p now", "http://evil.com/p"),
        _pos(t, "Payloads staged at https://files.badhost.org/drop.bin for days.",
             "https://files.badhost.org/drop.bin"),
        _pos(t, "C2 at hxxps://update-check[.]example[.]com/beacon?id=7 responded.",
             "https://update-check.example.com/beacon?id=7"),
        _pos(t, "Mirror ftp://archive.example.net/tools.tgz stayed online.",
             "ftp://archive.example.net/tools.tgz"),
        _pos(t, "The link http://203.0.113.9:8080/gate.php redirected.",
             "http://203.0.113.9:8080/gate.php"),
        _neg(t, "Scheme http:// has no host."),
        _neg(t, "Typo http:/single.slash misses a slash."),
        _neg(t, "Protocol gopher://old.example.com is unsupported.",
             [("DOMAINS", "old.example.com")]),
        _neg(t, r"Listen on http\:broken today."),
        _neg(t, "An https discussion without links."),
    ]

    # USER_AGENTS
    t = "USER_AGENTS"
    ua1 = "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36"
    ua4 = "Mozilla/4.0 (compatible; MSIE 8.0; Windows NT 6.1)"
    cases += [
        _pos(t, f"Captured header:\nUser-Agent: {ua1}\nEnd of capture.", ua1),
        _pos(t, "Beacon traffic sent:\nUser-Agent: curl/7.68.0\nevery five minutes.",
             "curl/7.68.0"),
        _pos(t, "The header list included:\nUser-Agent: python-requests/2.31.0\namong defaults.",
             "python-requests/2.31.0"),
        _pos(t, f"The page logged {ua4}\nas the agent.", ua4),
        _pos(t, "Proxy recorded:\nuser-agent: Wget/1.21\nduring the sweep.", "Wget/1.21"),
        _neg(t, "User-Agent: \nwas empty."),
        _neg(t, "The user agent rotated constantly."),
        _neg(t, "Mozilla without a version string."),
        _neg(t, "Agent Mozilla/x.y failed to parse."),
        _neg(t, "UserAgent: unknown-client/1.0 missing hyphen."),
    ]

    return cases


CASES = build_cases()
