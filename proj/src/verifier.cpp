#include "trisketch/verifier.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace trisketch {

namespace {

struct ReplayBin {
  SparseTriple triple;
  std::uint32_t count = 0;
  std::optional<Witness> witness;
};

struct ReplayClass {
  SparseTriple sigma;
  std::vector<std::vector<ProbePair>> probes;  // index t-1
  std::map<std::pair<std::uint32_t, std::uint32_t>, ReplayBin> bins;
  std::vector<CollisionRecord> registered;  // order in which pairs became due
};

struct Replay {
  std::map<AnchorClassKey, ReplayClass, ClassOrder> classes;
  std::map<std::pair<std::uint32_t, Vertex>, std::vector<SparseTriple>> slots;

  SparseTriple slot(std::uint32_t i, Vertex x, std::uint64_t sidx) const {
    auto it = slots.find({i, x});
    if (it == slots.end() || sidx >= it->second.size()) return {};
    return it->second[sidx];
  }
};

// Materialization pass regenerated from the seeds: slot filter, prefix
// matching, probed-bin counts and first witnesses.
Replay replay(const OrientedGraph& g, const SeedBundle& s) {
  const Params& p = s.params();
  const PrimeField& F = s.field();
  const std::uint32_t T = p.num_buckets();
  Replay out;

  for (const Arc& e : g.arcs()) {
    const std::uint64_t deg = g.base().degree(e.from);
    const FieldElement id = s.id_hash(e.to);
    for (std::uint32_t i = 1; i <= p.num_layers(); ++i) {
      if (!s.keep_coin(e, i)) continue;
      auto& arr = out.slots[{i, e.from}];
      if (arr.empty()) arr.resize(p.slots_for(deg));
      const std::uint64_t sidx = s.slot_index(e.from, e.to, i, arr.size());
      arr[sidx] = F.accumulate(arr[sidx], s.sign_hash(e.from, e.to, i), id);
      const SparseTriple z = arr[sidx];
      if (!F.decodes_to(z, id)) continue;

      const FieldElement delta = s.pk_offset(i, e.from, e.to);
      for (std::uint32_t r = 0; r <= p.level_horizon(deg, i); ++r) {
        const Prefix b = s.prefix(i, e.from, r);
        if (b != s.prefix(i, e.to, r)) continue;
        ReplayClass& cls = out.classes[{i, e.from, b}];
        if (cls.probes.empty()) {
          for (std::uint32_t t = 1; t <= p.num_groups(); ++t) cls.probes.push_back(s.probed_pairs(i, e.from, r, b, t));
        }
        cls.sigma = F.add(cls.sigma, z);
        for (std::uint32_t t = 1; t <= p.num_groups(); ++t) {
          const std::uint32_t j = s.bucket(i, r, t, delta);
          const auto& pp = cls.probes[t - 1];
          if (std::none_of(pp.begin(), pp.end(), [&](const ProbePair& q) { return q.contains(j); })) continue;
          ReplayBin& bin = cls.bins[{t, j}];
          bin.triple = F.add(bin.triple, z);
          ++bin.count;
          if (!bin.witness) bin.witness = Witness{e, sidx, t};

          const std::uint32_t js = complement(j, T);
          if (j == js) {
            if (bin.count == 2) cls.registered.push_back({t, j, js, *bin.witness, *bin.witness, true});
          } else if (bin.count == 1) {
            auto other = cls.bins.find({t, js});
            if (other != cls.bins.end() && other->second.count > 0)
              cls.registered.push_back({t, j, js, *bin.witness, *other->second.witness, true});
          }
        }
      }
    }
  }
  // Group-major, registration order within each group.
  for (auto& [key, cls] : out.classes) {
    std::stable_sort(cls.registered.begin(), cls.registered.end(),
                     [](const CollisionRecord& a, const CollisionRecord& b) { return a.group < b.group; });
  }
  return out;
}

std::set<ShouldCheckKey> domain_of(const Replay& rp) {
  std::set<ShouldCheckKey> q;
  for (const auto& [key, cls] : rp.classes) {
    for (std::uint32_t t = 1; t <= cls.probes.size(); ++t) {
      for (const ProbePair& pp : cls.probes[t - 1]) {
        auto count = [&](std::uint32_t j) {
          auto it = cls.bins.find({t, j});
          return it == cls.bins.end() ? 0u : it->second.count;
        };
        const bool due = pp.lo == pp.hi ? count(pp.lo) >= 2 : count(pp.lo) > 0 && count(pp.hi) > 0;
        if (due) q.insert({key.layer, key.anchor, key.prefix, t, pp.lo});
      }
    }
  }
  return q;
}

std::string idx(std::string_view base, std::size_t k) { return std::string(base) + "[" + std::to_string(k) + "]"; }

std::string witness_str(const Witness& w) {
  return std::to_string(w.arc.from) + "->" + std::to_string(w.arc.to) + "@" + std::to_string(w.slot);
}

std::optional<VerifyVerdict> compare_record(const CollisionRecord& got, const CollisionRecord& want,
                                            const std::string& path) {
  auto bad = [&](const char* field, std::string detail) {
    return VerifyVerdict::reject_replay(path + "." + field, std::move(detail));
  };
  if (got.group != want.group) return bad("group", "expected group " + std::to_string(want.group));
  if (got.j != want.j) return bad("j", "expected bucket " + std::to_string(want.j));
  if (got.j_star != want.j_star) return bad("j_star", "expected bucket " + std::to_string(want.j_star));
  if (!(got.wit_v == want.wit_v)) return bad("wit_v", "expected witness " + witness_str(want.wit_v));
  if (!(got.wit_w == want.wit_w)) return bad("wit_w", "expected witness " + witness_str(want.wit_w));
  if (!got.paired_once) return bad("paired_once", "a registered pair is paired exactly once");
  return std::nullopt;
}

}  // namespace

std::string_view to_string(VerifyVerdict::Kind k) {
  switch (k) {
    case VerifyVerdict::Kind::AcceptNo: return "AcceptNo";
    case VerifyVerdict::Kind::AcceptYes: return "AcceptYes";
    case VerifyVerdict::Kind::RejectCoverage: return "RejectCoverage";
    case VerifyVerdict::Kind::RejectReplay: return "RejectReplay";
  }
  return "?";
}

std::string describe(const VerifyVerdict& v) {
  std::ostringstream os;
  os << to_string(v.kind);
  switch (v.kind) {
    case VerifyVerdict::Kind::AcceptNo: break;
    case VerifyVerdict::Kind::AcceptYes:
      os << " " << v.triangle->x << " " << v.triangle->v << " " << v.triangle->w;
      break;
    case VerifyVerdict::Kind::RejectCoverage:
      os << " missing=" << v.missing.size() << " extra=" << v.extra.size();
      for (const auto& k : v.missing) os << "\n  missing " << to_string(k);
      for (const auto& k : v.extra) os << "\n  extra " << to_string(k);
      break;
    case VerifyVerdict::Kind::RejectReplay:
      os << " " << (v.path.empty() ? "<root>" : v.path) << ": " << v.detail;
      break;
  }
  return os.str();
}

std::set<ShouldCheckKey> reconstruct_should_check_domain(const OrientedGraph& g, const SeedsRecord& seeds) {
  SeedBundle s(seeds);
  if (s.params().n != g.n())
    throw ParamMismatch("seeds configured for n=" + std::to_string(s.params().n) + " but graph has n=" +
                        std::to_string(g.n()));
  s.params().validate_field_budget();
  return domain_of(replay(g, s));
}

VerifyVerdict verify_yes(const OrientedGraph& g, const Certificate& cert) {
  if (!cert.outcome) return VerifyVerdict::reject_replay("outcome", "not a YES certificate");
  const TriangleClaim& t = *cert.outcome;
  for (Vertex u : {t.x, t.v, t.w}) {
    if (u >= g.n()) return VerifyVerdict::reject_replay("outcome.triangle", "vertex id out of range");
  }
  const auto& G = g.base();
  if (!G.is_adjacent(t.x, t.v) || !G.is_adjacent(t.x, t.w) || !G.is_adjacent(t.v, t.w))
    return VerifyVerdict::reject_replay("outcome.triangle", "claimed vertices are not pairwise adjacent");
  return VerifyVerdict::accept_yes(t);
}

VerifyVerdict verify_no(const OrientedGraph& g, const Certificate& cert) {
  if (cert.outcome) return verify_yes(g, cert);

  std::optional<SeedBundle> bundle;
  try {
    bundle.emplace(cert.seeds);
    if (bundle->params().n != g.n())
      return VerifyVerdict::reject_replay("seeds.params.n", "graph has n=" + std::to_string(g.n()));
    bundle->params().validate_field_budget();
  } catch (const ParamError& e) {
    return VerifyVerdict::reject_replay("seeds", e.what());
  }
  const SeedBundle& s = *bundle;
  const PrimeField& F = s.field();
  const Replay rp = replay(g, s);

  // Class triples and pass bits.
  std::size_t k = 0;
  for (const auto& [key, cls] : rp.classes) {
    if (k >= cert.class_logs.size())
      return VerifyVerdict::reject_replay(idx("class_logs", k), "missing active class");
    const ClassLogEntry& e = cert.class_logs[k];
    if (!(e.key == key)) return VerifyVerdict::reject_replay(idx("class_logs", k), "class key does not replay");
    if (!(e.sigma == cls.sigma)) return VerifyVerdict::reject_replay(idx("class_logs", k) + ".sigma", "class triple differs");
    if (e.pass_class != F.one_sparse_test(cls.sigma).has_value())
      return VerifyVerdict::reject_replay(idx("class_logs", k) + ".pass_class", "pass bit differs");
    ++k;
  }
  if (k != cert.class_logs.size())
    return VerifyVerdict::reject_replay(idx("class_logs", k), "class is not active under replay");

  // Coverage: LogPairs must equal Q exactly.
  std::set<ShouldCheckKey> logged;
  for (std::size_t c = 0; c < cert.class_logs.size(); ++c) {
    const auto& e = cert.class_logs[c];
    for (std::size_t q = 0; q < e.collisions.size(); ++q) {
      const auto& r = e.collisions[q];
      if (!logged.insert({e.key.layer, e.key.anchor, e.key.prefix, r.group, std::min(r.j, r.j_star)}).second)
        return VerifyVerdict::reject_replay(idx(idx("class_logs", c) + ".collisions", q), "duplicate key");
    }
  }
  const std::set<ShouldCheckKey> domain = domain_of(rp);
  if (logged != domain) {
    VerifyVerdict v;
    v.kind = VerifyVerdict::Kind::RejectCoverage;
    std::set_difference(domain.begin(), domain.end(), logged.begin(), logged.end(),
                        std::inserter(v.missing, v.missing.end()));
    std::set_difference(logged.begin(), logged.end(), domain.begin(), domain.end(),
                        std::inserter(v.extra, v.extra.end()));
    return v;
  }

  // Collision records: fields, order and witnesses.
  std::set<std::tuple<std::uint32_t, Vertex, std::uint64_t>> referenced;
  struct Due {
    ShouldCheckKey key;
    const CollisionRecord* rec;
  };
  std::vector<Due> due;
  k = 0;
  for (const auto& [key, cls] : rp.classes) {
    const ClassLogEntry& e = cert.class_logs[k];
    const std::string base = idx("class_logs", k) + ".collisions";
    if (e.collisions.size() != cls.registered.size())
      return VerifyVerdict::reject_replay(base, "collision count differs");
    for (std::size_t q = 0; q < e.collisions.size(); ++q) {
      if (auto bad = compare_record(e.collisions[q], cls.registered[q], idx(base, q))) return *bad;
      const auto& r = e.collisions[q];
      referenced.insert({key.layer, key.anchor, r.wit_v.slot});
      referenced.insert({key.layer, key.anchor, r.wit_w.slot});
      due.push_back({{key.layer, key.anchor, key.prefix, r.group, std::min(r.j, r.j_star)}, &r});
    }
    ++k;
  }

  // Slot logs: exactly the referenced slots, with replayed values.
  k = 0;
  for (const auto& [layer, anchor, sidx] : referenced) {
    const std::string path = idx("slot_logs", k);
    if (k >= cert.slot_logs.size()) return VerifyVerdict::reject_replay(path, "missing referenced slot");
    const SlotLogEntry& e = cert.slot_logs[k];
    if (e.layer != layer || e.anchor != anchor || e.slot != sidx)
      return VerifyVerdict::reject_replay(path, "slot is not referenced by a witness");
    const SparseTriple z = rp.slot(layer, anchor, sidx);
    if (!(e.triple == z)) return VerifyVerdict::reject_replay(path + ".triple", "slot triple differs");
    const auto decoded = F.one_sparse_test(z);
    if (e.pass_slot != decoded.has_value()) return VerifyVerdict::reject_replay(path + ".pass_slot", "pass bit differs");
    if (!(e.decoded == decoded.value_or(FieldElement{})))
      return VerifyVerdict::reject_replay(path + ".decoded", "decoded id differs");
    ++k;
  }
  if (k != cert.slot_logs.size()) return VerifyVerdict::reject_replay(idx("slot_logs", k), "unreferenced slot");

  // Gates 1-3 decide which keys owe an adjacency probe.
  std::vector<AdjLogEntry> expected;
  for (const Due& d : due) {
    const ReplayClass& cls = rp.classes.at(d.key.class_key());
    const CollisionRecord& r = *d.rec;
    const FieldElement hv = s.id_hash(r.wit_v.arc.to);
    const FieldElement hw = s.id_hash(r.wit_w.arc.to);
    auto bin_ok = [&](std::uint32_t j, FieldElement h) {
      auto it = cls.bins.find({r.group, j});
      return it != cls.bins.end() && F.decodes_to(it->second.triple, h);
    };
    const bool pass = (!s.params().class_gate || F.one_sparse_test(cls.sigma).has_value()) && bin_ok(r.j, hv) && bin_ok(r.j_star, hw) &&
                      F.decodes_to(rp.slot(d.key.layer, d.key.anchor, r.wit_v.slot), hv) &&
                      F.decodes_to(rp.slot(d.key.layer, d.key.anchor, r.wit_w.slot), hw);
    if (pass)
      expected.push_back({d.key, hv, hw, r.wit_v.arc, r.wit_w.arc, g.is_adjacent(r.wit_v.arc.to, r.wit_w.arc.to)});
  }
  std::sort(expected.begin(), expected.end(), [](const AdjLogEntry& a, const AdjLogEntry& b) { return a.key < b.key; });

  std::optional<TriangleClaim> found;
  for (k = 0; k < expected.size(); ++k) {
    const std::string path = idx("adj_logs", k);
    if (k >= cert.adj_logs.size()) return VerifyVerdict::reject_replay(path, "missing adjacency probe");
    const AdjLogEntry& got = cert.adj_logs[k];
    const AdjLogEntry& want = expected[k];
    if (!(got.key == want.key)) return VerifyVerdict::reject_replay(path + ".key", "probe key does not replay");
    if (!(got.fingerprint_v == want.fingerprint_v))
      return VerifyVerdict::reject_replay(path + ".fingerprint_v", "fingerprint differs");
    if (!(got.fingerprint_w == want.fingerprint_w))
      return VerifyVerdict::reject_replay(path + ".fingerprint_w", "fingerprint differs");
    if (!(got.arc_v == want.arc_v)) return VerifyVerdict::reject_replay(path + ".arc_v", "witness arc differs");
    if (!(got.arc_w == want.arc_w)) return VerifyVerdict::reject_replay(path + ".arc_w", "witness arc differs");
    if (got.adjacent != want.adjacent)
      return VerifyVerdict::reject_replay(path + ".adjacent", "adjacency bit contradicts the graph");
    if (want.adjacent && !found) found = TriangleClaim{want.arc_v.from, want.arc_v.to, want.arc_w.to};
  }
  if (k != cert.adj_logs.size()) return VerifyVerdict::reject_replay(idx("adj_logs", k), "probe not reached by gates");

  if (found) {
    Certificate yes = cert;
    yes.outcome = found;
    return verify_yes(g, yes);
  }
  return VerifyVerdict::accept_no();
}

}  // namespace trisketch
