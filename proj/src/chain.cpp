#include <polyban/chain.hpp>

#include <set>
#include <sstream>

namespace polyban {

namespace {

void require_isometric(const LinMap& m, const std::string& who) {
  EmbeddingCheck chk = certify_embedding(m, 0);
  if (!chk.ok())
    throw PreconditionError(who + " is not an isometric embedding",
                            chk.refutation ? std::optional<Vec>(chk.refutation->x)
                                           : std::nullopt);
}

void require_into_stage(const LinMap& anchor, const Chain& c, int stage, const std::string& who) {
  if (stage < 0 || stage >= static_cast<int>(c.stages.size()))
    throw PreconditionError(who + ": anchor stage out of range");
  if (anchor.codomain->id() != c.stages[static_cast<size_t>(stage)]->id())
    throw PreconditionError(who + ": anchor does not target the stated stage");
}

struct StageExt {
  LinMap embedding;  // X -> new top
  LinMap link;       // old top -> new top (identity when !grew)
  bool grew = false;
  std::optional<AmalgamResult> am;
};

StageExt extend_stage(Chain& c, const LinMap& inclusion, const LinMap& anchor_top) {
  const SpacePtr& x0 = inclusion.domain;
  const SpacePtr& x = inclusion.codomain;
  if (x0->dim() == x->dim()) {
    // The inclusion is a bijective isometry: the anchor already solves the
    // problem inside the current top stage.
    const Mat inv = inverse_of(inclusion.matrix);
    LinMap emb = make_map(x, c.top(), anchor_top.matrix * inv);
    return StageExt{std::move(emb), identity_map(c.top()), false, std::nullopt};
  }
  std::ostringstream os;
  os << c.label << "/s" << c.stages.size();
  AmalgamResult am = pushout_exact(inclusion, anchor_top, os.str());
  c.stages.push_back(am.Z);
  c.links.push_back(am.j);
  StageExt out{am.i, am.j, true, std::nullopt};
  out.am = std::move(am);
  return out;
}

}  // namespace

Chain make_chain(SpacePtr g0, std::string label) {
  Chain c;
  c.label = std::move(label);
  c.stages.push_back(std::move(g0));
  return c;
}

LinMap chain_link(const Chain& c, int from, int to) {
  if (from < 0 || to < from || to >= static_cast<int>(c.stages.size()))
    throw std::invalid_argument("chain_link: bad stage range");
  LinMap acc = identity_map(c.stages[static_cast<size_t>(from)]);
  for (int s = from; s < to; ++s) acc = compose(c.links[static_cast<size_t>(s)], acc);
  return acc;
}

ExtensionOutcome solve_extension_space(Chain& chain, const SpaceExtensionProblem& prob) {
  if (prob.inclusion.domain->id() != prob.anchor.domain->id())
    throw PreconditionError("solve_extension_space: inclusion and anchor domains differ");
  require_isometric(prob.inclusion, "solve_extension_space: inclusion");
  require_into_stage(prob.anchor, chain, prob.anchor_stage, "solve_extension_space");
  require_isometric(prob.anchor, "solve_extension_space: anchor");

  const LinMap anchor_top =
      compose(chain_link(chain, prob.anchor_stage, chain.top_index()), prob.anchor);
  StageExt ext = extend_stage(chain, prob.inclusion, anchor_top);

  if (compose(ext.embedding, prob.inclusion).matrix !=
      compose(ext.link, anchor_top).matrix)
    throw VerificationError("solve_extension_space: witness does not extend the anchor");
  require_isometric(ext.embedding, "solve_extension_space: witness");

  ChainLogEntry entry;
  entry.kind = "space";
  entry.inclusion = prob.inclusion;
  entry.anchor = prob.anchor;
  entry.anchor_stage = prob.anchor_stage;
  entry.witness = ext.embedding;
  entry.result_stage = chain.top_index();
  entry.grew = ext.grew;
  chain.log.push_back(entry);

  return ExtensionOutcome{ext.embedding, chain.top_index(), ext.grew};
}

OperatorChain make_left_chain(Chain s_chain, std::string label) {
  OperatorChain oc;
  oc.kind = OperatorChain::Kind::Left;
  oc.codomain = std::move(s_chain);
  oc.domain = make_chain(oc.codomain.stages.front(), std::move(label));
  oc.ops.push_back(identity_map(oc.domain.top()));
  oc.cod_stage.push_back(0);
  return oc;
}

OperatorChain make_left_chain(SpacePtr s, std::string label) {
  return make_left_chain(make_chain(std::move(s), "S"), std::move(label));
}

OperatorChain make_two_sided_chain(SpacePtr v0, SpacePtr w0, Mat omega0, std::string label) {
  OperatorChain oc;
  oc.kind = OperatorChain::Kind::TwoSided;
  oc.domain = make_chain(std::move(v0), label + "dom");
  oc.codomain = make_chain(std::move(w0), label + "cod");
  LinMap om = make_map(oc.domain.top(), oc.codomain.top(), std::move(omega0));
  OpNormResult n = op_norm_attained(om);
  if (n.value > 1)
    throw PreconditionError("make_two_sided_chain: seed operator is expansive", n.arg);
  oc.ops.push_back(std::move(om));
  oc.cod_stage.push_back(0);
  return oc;
}

LinMap aligned_top_op(const OperatorChain& oc, int m) {
  const int cur = oc.cod_stage.back();
  if (m < cur) throw std::invalid_argument("aligned_top_op: cannot rewind the codomain");
  return compose(chain_link(oc.codomain, cur, m), oc.ops.back());
}

LinMap chain_right_inverse(const OperatorChain& oc) {
  return chain_link(oc.domain, 0, oc.domain.top_index());
}

ExtensionOutcome solve_extension_left(OperatorChain& oc, const LeftExtensionProblem& prob) {
  if (oc.kind != OperatorChain::Kind::Left)
    throw PreconditionError("solve_extension_left: chain is not in left mode");
  if (prob.inclusion.domain->id() != prob.anchor.domain->id())
    throw PreconditionError("solve_extension_left: inclusion and anchor domains differ");
  require_isometric(prob.inclusion, "solve_extension_left: inclusion");
  require_into_stage(prob.anchor, oc.domain, prob.anchor_stage, "solve_extension_left");
  require_isometric(prob.anchor, "solve_extension_left: anchor");
  if (prob.target.domain->id() != prob.inclusion.codomain->id())
    throw PreconditionError("solve_extension_left: target domain is not X");
  OpNormResult tn = op_norm_attained(prob.target);
  if (tn.value > 1) throw PreconditionError("solve_extension_left: target is expansive", tn.arg);
  if (prob.target_stage < 0 ||
      prob.target_stage >= static_cast<int>(oc.codomain.stages.size()))
    throw PreconditionError("solve_extension_left: target stage out of range");

  const int m = std::max(oc.cod_stage.back(), prob.target_stage);
  const LinMap t_aligned =
      compose(chain_link(oc.codomain, prob.target_stage, m), prob.target);
  const LinMap p_aligned = aligned_top_op(oc, m);
  const LinMap anchor_top =
      compose(chain_link(oc.domain, prob.anchor_stage, oc.domain.top_index()), prob.anchor);

  if (compose(p_aligned, anchor_top).matrix != compose(t_aligned, prob.inclusion).matrix)
    throw PreconditionError("solve_extension_left: P . e != T|X0 (compatibility)");

  StageExt ext = extend_stage(oc.domain, prob.inclusion, anchor_top);
  if (ext.grew) {
    LinMap p_new = induce_operator(*ext.am, t_aligned, p_aligned);
    OpNormResult pn = op_norm_attained(p_new);
    if (pn.value > 1)
      throw VerificationError("solve_extension_left: extended operator is expansive", pn.arg);
    oc.ops.push_back(std::move(p_new));
    oc.cod_stage.push_back(m);
  }

  const LinMap p_check = aligned_top_op(oc, m);
  if (compose(p_check, ext.embedding).matrix != t_aligned.matrix)
    throw VerificationError("solve_extension_left: P . f != T");
  if (compose(ext.embedding, prob.inclusion).matrix != compose(ext.link, anchor_top).matrix)
    throw VerificationError("solve_extension_left: f does not extend the anchor");
  require_isometric(ext.embedding, "solve_extension_left: witness");

  ChainLogEntry entry;
  entry.kind = "left";
  entry.inclusion = prob.inclusion;
  entry.anchor = prob.anchor;
  entry.anchor_stage = prob.anchor_stage;
  entry.witness = ext.embedding;
  entry.result_stage = oc.domain.top_index();
  entry.grew = ext.grew;
  entry.target = prob.target;
  entry.target_stage = prob.target_stage;
  oc.log.push_back(entry);

  return ExtensionOutcome{ext.embedding, oc.domain.top_index(), ext.grew};
}

TwoSidedOutcome solve_extension_two_sided(OperatorChain& oc, const TwoSidedExtensionProblem& prob) {
  if (oc.kind != OperatorChain::Kind::TwoSided)
    throw PreconditionError("solve_extension_two_sided: chain is not in two-sided mode");
  require_isometric(prob.dom_inclusion, "two_sided: domain inclusion");
  require_isometric(prob.cod_inclusion, "two_sided: codomain inclusion");
  require_into_stage(prob.dom_anchor, oc.domain, prob.dom_anchor_stage, "two_sided (domain)");
  require_into_stage(prob.cod_anchor, oc.codomain, prob.cod_anchor_stage, "two_sided (codomain)");
  require_isometric(prob.dom_anchor, "two_sided: domain anchor");
  require_isometric(prob.cod_anchor, "two_sided: codomain anchor");
  OpNormResult tn = op_norm_attained(prob.target);
  if (tn.value > 1) throw PreconditionError("two_sided: target is expansive", tn.arg);
  if (compose(prob.target, prob.dom_inclusion).matrix !=
      compose(prob.cod_inclusion, prob.op_restriction).matrix)
    throw PreconditionError("two_sided: T . incX != incY . T0");

  const LinMap dom_anchor_top = compose(
      chain_link(oc.domain, prob.dom_anchor_stage, oc.domain.top_index()), prob.dom_anchor);
  const LinMap cod_anchor_top = compose(
      chain_link(oc.codomain, prob.cod_anchor_stage, oc.codomain.top_index()), prob.cod_anchor);

  if (compose(oc.ops.back(), dom_anchor_top).matrix !=
      compose(cod_anchor_top, prob.op_restriction).matrix)
    throw PreconditionError("two_sided: Omega . i != j . T0 (compatibility)");

  StageExt cod_ext = extend_stage(oc.codomain, prob.cod_inclusion, cod_anchor_top);
  StageExt dom_ext = extend_stage(oc.domain, prob.dom_inclusion, dom_anchor_top);

  LinMap omega_new = [&]() {
    const LinMap a = compose(cod_ext.embedding, prob.target);
    const LinMap b = compose(cod_ext.link, oc.ops.back());
    if (dom_ext.grew) return induce_operator(*dom_ext.am, a, b);
    return b;  // domain unchanged: only the codomain target advances
  }();
  OpNormResult on = op_norm_attained(omega_new);
  if (on.value > 1)
    throw VerificationError("two_sided: extended operator is expansive", on.arg);

  if (dom_ext.grew) {
    oc.ops.push_back(omega_new);
    oc.cod_stage.push_back(oc.codomain.top_index());
  } else if (cod_ext.grew) {
    oc.ops.back() = omega_new;
    oc.cod_stage.back() = oc.codomain.top_index();
  }

  if (compose(oc.ops.back(), dom_ext.embedding).matrix !=
      compose(cod_ext.embedding, prob.target).matrix)
    throw VerificationError("two_sided: Omega . i-hat != j-hat . T");
  require_isometric(dom_ext.embedding, "two_sided: domain witness");
  require_isometric(cod_ext.embedding, "two_sided: codomain witness");

  ChainLogEntry entry;
  entry.kind = "two-sided";
  entry.inclusion = prob.dom_inclusion;
  entry.anchor = prob.dom_anchor;
  entry.anchor_stage = prob.dom_anchor_stage;
  entry.witness = dom_ext.embedding;
  entry.result_stage = oc.domain.top_index();
  entry.grew = dom_ext.grew;
  entry.target = prob.target;
  entry.cod_inclusion = prob.cod_inclusion;
  entry.cod_anchor = prob.cod_anchor;
  entry.cod_anchor_stage = prob.cod_anchor_stage;
  entry.op_restriction = prob.op_restriction;
  entry.cod_witness = cod_ext.embedding;
  entry.cod_result_stage = oc.codomain.top_index();
  oc.log.push_back(entry);

  return TwoSidedOutcome{dom_ext.embedding, cod_ext.embedding, oc.domain.top_index(),
                         oc.codomain.top_index()};
}

// ---- builders --------------------------------------------------------------

Chain build_gurarii_chain(SpacePtr g0, const std::vector<LinMap>& catalog, int steps,
                          std::string label) {
  Chain c = make_chain(std::move(g0), std::move(label));

  // Entries: per-catalog bootstrap ({0} -> X0) where needed, then the entry.
  std::vector<LinMap> entries;
  std::set<std::string> booted;
  for (const auto& inc : catalog) {
    const std::string x0 = inc.domain->id();
    if (inc.domain->dim() > 0 && !booted.count(x0)) {
      entries.push_back(zero_map(zero_space(), inc.domain));
      booted.insert(x0);
    }
    entries.push_back(inc);
  }

  struct Anchor {
    std::string space_id;
    int stage;
    LinMap map;
  };
  std::vector<Anchor> anchors{{zero_space()->id(), 0, zero_map(zero_space(), c.top())}};
  if (c.top()->dim() > 0) anchors.push_back({c.top()->id(), 0, identity_map(c.top())});
  std::deque<std::pair<size_t, size_t>> pending;
  std::set<std::pair<size_t, size_t>> seen;

  auto enqueue_matches = [&](size_t anchor_idx) {
    for (size_t ei = 0; ei < entries.size(); ++ei) {
      if (entries[ei].domain->id() != anchors[anchor_idx].space_id) continue;
      if (seen.insert({ei, anchor_idx}).second) pending.push_back({ei, anchor_idx});
    }
  };
  for (size_t ai = 0; ai < anchors.size(); ++ai) enqueue_matches(ai);

  for (int t = 0; t < steps && !pending.empty(); ++t) {
    auto [ei, ai] = pending.front();
    pending.pop_front();
    SpaceExtensionProblem prob{entries[ei], anchors[ai].map, anchors[ai].stage};
    ExtensionOutcome out = solve_extension_space(c, prob);
    anchors.push_back({entries[ei].codomain->id(), out.result_stage, out.witness});
    enqueue_matches(anchors.size() - 1);
  }
  return c;
}

OperatorChain build_left_gurarii_chain(Chain s_chain, const std::vector<LeftCatalogEntry>& catalog,
                                       int steps, std::string label) {
  OperatorChain oc = make_left_chain(std::move(s_chain), std::move(label));

  struct Entry {
    LinMap inclusion;
    LinMap target;
    int target_stage;
  };
  std::vector<Entry> entries;
  for (const auto& e : catalog) {
    if (e.inclusion.domain->dim() > 0) {
      // Bootstrap: realize X0 itself over the restricted target first.
      entries.push_back({zero_map(zero_space(), e.inclusion.domain),
                         compose(e.target, e.inclusion), e.target_stage});
    }
    entries.push_back({e.inclusion, e.target, e.target_stage});
  }

  struct Anchor {
    std::string space_id;
    int stage;
    LinMap map;
    LinMap trace;  // P . map into codomain stage trace_stage
    int trace_stage;
  };
  std::vector<Anchor> anchors{{zero_space()->id(), 0, zero_map(zero_space(), oc.domain.top()),
                               zero_map(zero_space(), oc.codomain.stages.front()), 0}};
  if (oc.domain.top()->dim() > 0)
    anchors.push_back(
        {oc.domain.top()->id(), 0, identity_map(oc.domain.top()), oc.ops.front(), 0});
  std::deque<std::pair<size_t, size_t>> pending;
  std::set<std::pair<size_t, size_t>> seen;

  auto compatible = [&](const Entry& e, const Anchor& a) {
    if (e.inclusion.domain->id() != a.space_id) return false;
    // align trace and T|X0 to a common codomain stage and compare exactly
    const int m = std::max(e.target_stage, a.trace_stage);
    const Mat lhs =
        compose(chain_link(oc.codomain, a.trace_stage, m), a.trace).matrix;
    const Mat rhs = compose(chain_link(oc.codomain, e.target_stage, m),
                            compose(e.target, e.inclusion))
                        .matrix;
    return lhs == rhs;
  };
  auto enqueue_matches = [&](size_t anchor_idx) {
    for (size_t ei = 0; ei < entries.size(); ++ei) {
      if (!compatible(entries[ei], anchors[anchor_idx])) continue;
      if (seen.insert({ei, anchor_idx}).second) pending.push_back({ei, anchor_idx});
    }
  };
  for (size_t ai = 0; ai < anchors.size(); ++ai) enqueue_matches(ai);

  for (int t = 0; t < steps && !pending.empty(); ++t) {
    auto [ei, ai] = pending.front();
    pending.pop_front();
    const Entry& e = entries[ei];
    LeftExtensionProblem prob{e.inclusion, anchors[ai].map, anchors[ai].stage, e.target,
                              e.target_stage};
    ExtensionOutcome out = solve_extension_left(oc, prob);
    anchors.push_back({e.inclusion.codomain->id(), out.result_stage, out.witness, e.target,
                       e.target_stage});
    enqueue_matches(anchors.size() - 1);
  }
  return oc;
}

OperatorChain build_left_gurarii_chain(SpacePtr s, const std::vector<LeftCatalogEntry>& catalog,
                                       int steps, std::string label) {
  return build_left_gurarii_chain(make_chain(std::move(s), "S"), catalog, steps,
                                  std::move(label));
}

OperatorChain build_universal_chain(SpacePtr v0, SpacePtr w0, Mat omega0,
                                    const std::vector<TwoSidedCatalogEntry>& catalog, int steps,
                                    std::string label) {
  OperatorChain oc = make_two_sided_chain(std::move(v0), std::move(w0), std::move(omega0),
                                          std::move(label));

  std::vector<TwoSidedCatalogEntry> entries;
  for (const auto& e : catalog) {
    if (e.dom_inclusion.domain->dim() > 0 || e.cod_inclusion.domain->dim() > 0) {
      TwoSidedCatalogEntry boot;
      boot.dom_inclusion = zero_map(zero_space(), e.dom_inclusion.domain);
      boot.cod_inclusion = zero_map(zero_space(), e.cod_inclusion.domain);
      boot.op_restriction = zero_map(zero_space(), zero_space());
      boot.target = e.op_restriction;
      entries.push_back(boot);
    }
    entries.push_back(e);
  }

  struct Anchor {
    std::string dom_id, cod_id;
    Mat trace;  // T0 realized between the anchored pair
    LinMap i, j;
    int i_stage, j_stage;
  };
  std::vector<Anchor> anchors{{zero_space()->id(), zero_space()->id(), Mat::Zero(0, 0),
                               zero_map(zero_space(), oc.domain.top()),
                               zero_map(zero_space(), oc.codomain.top()), 0, 0}};
  std::deque<std::pair<size_t, size_t>> pending;
  std::set<std::pair<size_t, size_t>> seen;

  auto compatible = [&](const TwoSidedCatalogEntry& e, const Anchor& a) {
    return e.dom_inclusion.domain->id() == a.dom_id &&
           e.cod_inclusion.domain->id() == a.cod_id && e.op_restriction.matrix == a.trace;
  };
  auto enqueue_matches = [&](size_t anchor_idx) {
    for (size_t ei = 0; ei < entries.size(); ++ei) {
      if (!compatible(entries[ei], anchors[anchor_idx])) continue;
      if (seen.insert({ei, anchor_idx}).second) pending.push_back({ei, anchor_idx});
    }
  };
  enqueue_matches(0);

  for (int t = 0; t < steps && !pending.empty(); ++t) {
    auto [ei, ai] = pending.front();
    pending.pop_front();
    const TwoSidedCatalogEntry& e = entries[ei];
    TwoSidedExtensionProblem prob{e.dom_inclusion, e.cod_inclusion, e.op_restriction,
                                  e.target,        anchors[ai].i,   anchors[ai].i_stage,
                                  anchors[ai].j,   anchors[ai].j_stage};
    TwoSidedOutcome out = solve_extension_two_sided(oc, prob);
    anchors.push_back({e.dom_inclusion.codomain->id(), e.cod_inclusion.codomain->id(),
                       e.target.matrix, out.dom_witness, out.cod_witness, out.dom_stage,
                       out.cod_stage});
    enqueue_matches(anchors.size() - 1);
  }
  return oc;
}

// ---- verification ----------------------------------------------------------

namespace {

void verify_link(const Chain& c, size_t n, ChainCheck& out) {
  const LinMap& link = c.links[n];
  const SpacePtr& lo = c.stages[n];
  const SpacePtr& hi = c.stages[n + 1];
  std::ostringstream tag;
  tag << c.label << " link " << n;
  if (link.domain->id() != lo->id() || link.codomain->id() != hi->id()) {
    out.fail(tag.str() + ": endpoints do not match the stages");
    return;
  }
  OpNormResult nn = op_norm_attained(link);
  if (nn.value > 1) {
    out.fail(tag.str() + ": link is expansive");
    return;
  }
  // Exact necessary conditions available in any dimension: vertices of the
  // lower ball keep norm one.
  for (const auto& v : lo->vrep().vertices) {
    if (norm_of(hi, (link.matrix * v).eval()) != 1) {
      out.fail(tag.str() + ": link moves a ball vertex off the sphere");
      return;
    }
  }
  // Full containment certificate whenever the lower stage has facets.
  if (lo->has_hrep() || lo->dim() <= default_dim_cap()) {
    try {
      if (!certify_embedding(link, 0).ok()) out.fail(tag.str() + ": direct certificate failed");
    } catch (const DimensionCapError&) {
      // vertex checks above plus the logged pushout premises stand in
    }
  }
}

void verify_log_entry(const Chain& c, const ChainLogEntry& e, ChainCheck& out,
                      const std::string& tag) {
  try {
    if (!certify_embedding(e.witness, 0).ok()) {
      out.fail(tag + ": witness is not isometric");
      return;
    }
    const LinMap anchored =
        compose(chain_link(c, e.anchor_stage, e.result_stage), e.anchor);
    if (compose(e.witness, e.inclusion).matrix != anchored.matrix)
      out.fail(tag + ": witness does not extend the anchor");
  } catch (const std::exception& ex) {
    out.fail(tag + ": " + ex.what());
  }
}

}  // namespace

ChainCheck verify_chain(const Chain& c) {
  ChainCheck out;
  if (c.stages.empty()) {
    out.fail("chain has no stages");
    return out;
  }
  if (c.links.size() + 1 != c.stages.size()) {
    out.fail("link count does not match stage count");
    return out;
  }
  for (size_t n = 0; n < c.links.size(); ++n) verify_link(c, n, out);
  for (size_t k = 0; k < c.log.size(); ++k) {
    std::ostringstream tag;
    tag << c.label << " log[" << k << "]";
    verify_log_entry(c, c.log[k], out, tag.str());
  }
  return out;
}

ChainCheck verify_operator_chain(const OperatorChain& oc) {
  ChainCheck out = verify_chain(oc.domain);
  ChainCheck cod = verify_chain(oc.codomain);
  for (auto& f : cod.failures) out.fail(std::move(f));

  if (oc.ops.size() != oc.domain.stages.size() &&
      oc.kind == OperatorChain::Kind::TwoSided)
    out.fail("operator count does not match domain stages");
  for (size_t n = 0; n < oc.ops.size(); ++n) {
    std::ostringstream tag;
    tag << "op[" << n << "]";
    if (op_norm(oc.ops[n]) > 1) out.fail(tag.str() + " is expansive");
    if (n + 1 < oc.ops.size()) {
      const int m0 = oc.cod_stage[n];
      const int m1 = oc.cod_stage[n + 1];
      const LinMap lhs = compose(oc.ops[n + 1], oc.domain.links[n]);
      const LinMap rhs = compose(chain_link(oc.codomain, m0, m1), oc.ops[n]);
      if (lhs.matrix != rhs.matrix) out.fail(tag.str() + " does not extend along the link");
    }
  }
  for (size_t k = 0; k < oc.log.size(); ++k) {
    std::ostringstream tag;
    tag << "oplog[" << k << "]";
    const ChainLogEntry& e = oc.log[k];
    verify_log_entry(oc.domain, e, out, tag.str());
    if (e.kind == "left" && e.target) {
      const int m = std::max(e.target_stage, oc.cod_stage[static_cast<size_t>(e.result_stage)]);
      const LinMap p = compose(
          chain_link(oc.codomain, oc.cod_stage[static_cast<size_t>(e.result_stage)], m),
          oc.ops[static_cast<size_t>(e.result_stage)]);
      const LinMap t = compose(chain_link(oc.codomain, e.target_stage, m), *e.target);
      if (compose(p, e.witness).matrix != t.matrix)
        out.fail(tag.str() + ": P . f != T");
    }
    if (e.kind == "two-sided" && e.cod_witness && e.target) {
      const LinMap lhs = compose(oc.ops[static_cast<size_t>(e.result_stage)], e.witness);
      const LinMap rhs = compose(*e.cod_witness, *e.target);
      if (lhs.matrix != rhs.matrix) out.fail(tag.str() + ": Omega . i != j . T");
    }
  }
  return out;
}

namespace {

bool anchors_agree(const Chain& c, const LinMap& a, int sa, const LinMap& b, int sb) {
  const int m = std::max(sa, sb);
  return compose(chain_link(c, sa, m), a).matrix == compose(chain_link(c, sb, m), b).matrix;
}

}  // namespace

GurariiReport check_gurarii(const Chain& c, const std::vector<SpaceExtensionProblem>& battery,
                            const Rational& eps) {
  GurariiReport rep;
  for (const auto& prob : battery) {
    BatteryVerdict v;
    for (const auto& e : c.log) {
      if (e.kind != "space") continue;
      if (e.inclusion.domain->id() != prob.inclusion.domain->id() ||
          e.inclusion.codomain->id() != prob.inclusion.codomain->id() ||
          e.inclusion.matrix != prob.inclusion.matrix)
        continue;
      if (!anchors_agree(c, e.anchor, e.anchor_stage, prob.anchor, prob.anchor_stage)) continue;
      EmbeddingCheck chk = certify_embedding(e.witness, eps);
      if (chk.ok()) {
        v.pass = true;
        v.stage = e.result_stage;
        v.note = "witness in log";
        break;
      }
      v.note = "logged witness fails the certificate";
    }
    if (!v.pass && v.note.empty()) v.note = "no witness in log";
    rep.all_pass = rep.all_pass && v.pass;
    rep.verdicts.push_back(std::move(v));
  }
  return rep;
}

GurariiReport check_gurarii(const OperatorChain& oc,
                            const std::vector<LeftExtensionProblem>& battery,
                            const Rational& eps) {
  GurariiReport rep;
  for (const auto& prob : battery) {
    BatteryVerdict v;
    for (const auto& e : oc.log) {
      if (e.kind != "left" || !e.target) continue;
      if (e.inclusion.domain->id() != prob.inclusion.domain->id() ||
          e.inclusion.codomain->id() != prob.inclusion.codomain->id() ||
          e.inclusion.matrix != prob.inclusion.matrix)
        continue;
      if (e.target->matrix != prob.target.matrix || e.target_stage != prob.target_stage)
        continue;
      if (!anchors_agree(oc.domain, e.anchor, e.anchor_stage, prob.anchor, prob.anchor_stage))
        continue;
      EmbeddingCheck chk = certify_embedding(e.witness, eps);
      if (chk.ok()) {
        v.pass = true;
        v.stage = e.result_stage;
        v.note = "witness in log";
        break;
      }
      v.note = "logged witness fails the certificate";
    }
    if (!v.pass && v.note.empty()) v.note = "no witness in log";
    rep.all_pass = rep.all_pass && v.pass;
    rep.verdicts.push_back(std::move(v));
  }
  return rep;
}

}  // namespace polyban
