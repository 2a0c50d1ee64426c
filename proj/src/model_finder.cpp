#include "posmod/model_finder.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_set>

#include "posmod/canonical.hpp"
#include "posmod/normal_form.hpp"
#include "posmod/semantics.hpp"

namespace posmod {

namespace {

struct HeadSpec {
  int own_vars = 0;  // bound variables of the conclusion disjunct
  std::vector<QueryAtom> atoms;
  bool pure_equality = false;
  int last_var = -1;  // largest universal variable used (pure equality heads)
};

struct GroundSpec {
  int universal = 0;
  int num_vars = 0;  // universal variables, then premise bound variables
  std::vector<QueryAtom> body;
  std::vector<HeadSpec> heads;
};

std::vector<GroundSpec> compile_theory(const Theory& t) {
  std::vector<GroundSpec> out;
  const auto& sig = t.signature();
  for (const auto& ax : t.axioms()) {
    const auto& s = ax.sentence;
    const int u = static_cast<int>(s.vars.size());
    std::vector<HeadSpec> heads;
    for (const auto& pp : pp_normal_form(s.conclusion)) {
      auto q = compile_pp(pp, s.vars, sig);
      HeadSpec h;
      h.own_vars = q.num_vars - u;
      h.atoms = q.atoms;
      h.pure_equality = h.own_vars == 0 && std::all_of(q.atoms.begin(), q.atoms.end(), [](const QueryAtom& a) {
                          return a.rel < 0;
                        });
      for (const auto& a : q.atoms)
        for (int v : a.args) h.last_var = std::max(h.last_var, v);
      heads.push_back(std::move(h));
    }
    for (const auto& pp : pp_normal_form(s.premise)) {
      auto q = compile_pp(pp, s.vars, sig);
      out.push_back({u, q.num_vars, q.atoms, heads});
    }
  }
  return out;
}

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ULL;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

class Solver {
 public:
  Solver(const Theory& t, const std::vector<GroundSpec>& specs, int n, std::vector<Element> consts,
         const FinderOptions& opt, FinderStats& stats, std::map<std::string, FiniteStructure>& found)
      : t_(t), specs_(specs), n_(n), consts_(std::move(consts)), opt_(opt), stats_(stats), found_(found) {
    const auto& rels = t.signature().relations();
    for (std::size_t r = 0; r < rels.size(); ++r) {
      base_.push_back(total_);
      int count = 1;
      for (int i = 0; i < rels[r].arity; ++i) count *= n;
      for (int k = 0; k < count; ++k) {
        Tuple tup(rels[r].arity);
        int x = k;
        for (int i = rels[r].arity - 1; i >= 0; --i) {
          tup[i] = x % n;
          x /= n;
        }
        atom_rel_.push_back(static_cast<int>(r));
        atom_tuple_.push_back(std::move(tup));
      }
      total_ += count;
    }
    value_.assign(total_, -1);
    occ_.resize(total_);
    level_order_.resize(total_);
    for (int i = 0; i < total_; ++i) level_order_[i] = i;
    auto key = [&](int a) {
      const auto& tup = atom_tuple_[a];
      int mx = tup.empty() ? 0 : *std::max_element(tup.begin(), tup.end());
      return std::make_tuple(mx, atom_rel_[a], tup);
    };
    std::stable_sort(level_order_.begin(), level_order_.end(), [&](int a, int b) { return key(a) < key(b); });
  }

  void run() {
    if (!ground()) return;
    stats_.instances += inst_body_first_.size() - 1;
    for (std::size_t i = 0; i + 1 < inst_body_first_.size(); ++i) queue_.push_back(static_cast<int>(i));
    if (!propagate()) return;
    std::vector<bool> fresh(n_, true);
    for (Element c : consts_) fresh[c] = false;
    search(fresh);
  }

 private:
  const Theory& t_;
  const std::vector<GroundSpec>& specs_;
  int n_;
  std::vector<Element> consts_;
  const FinderOptions& opt_;
  FinderStats& stats_;
  std::map<std::string, FiniteStructure>& found_;

  int total_ = 0;
  std::vector<int> base_;
  std::vector<int> atom_rel_;
  std::vector<Tuple> atom_tuple_;
  std::vector<int> level_order_;

  // Instances: body atoms and options (each option a conjunction of atoms).
  std::vector<int> inst_body_first_{0};
  std::vector<int> body_atoms_;
  std::vector<int> inst_opt_first_{0};
  std::vector<int> opt_atom_first_{0};
  std::vector<int> opt_atoms_;
  std::vector<int> opt_inst_;

  std::vector<int> body_true_, body_false_, live_;
  std::vector<int> opt_true_, opt_false_;
  std::vector<std::vector<int>> occ_;  // (instance << 1) for body, (option << 1) | 1 for options
  std::vector<signed char> value_;
  std::vector<int> trail_;
  std::vector<int> queue_;
  int assigned_ = 0;

  int atom_id(int rel, const Tuple& tup) const {
    int idx = 0;
    for (Element e : tup) idx = idx * n_ + e;
    return base_[rel] + idx;
  }

  Element arg_value(int arg, const std::vector<Element>& vals) const {
    return arg >= 0 ? vals[arg] : consts_[static_cast<std::size_t>(-arg - 1)];
  }

  // Returns false when some instance can never be satisfied at this size.
  bool ground() {
    std::unordered_set<std::vector<int>, VecHash> seen;
    bool ok = true;
    for (const auto& spec : specs_) {
      std::vector<Element> vals(spec.num_vars, 0);
      // Body equalities and pure-equality heads, indexed by the depth at which
      // they become decidable.
      std::vector<std::vector<int>> body_eq_at(spec.num_vars + 1), head_eq_at(spec.num_vars + 1);
      for (std::size_t i = 0; i < spec.body.size(); ++i) {
        if (spec.body[i].rel >= 0) continue;
        int last = -1;
        for (int v : spec.body[i].args) last = std::max(last, v);
        body_eq_at[last + 1].push_back(static_cast<int>(i));
      }
      for (std::size_t h = 0; h < spec.heads.size(); ++h)
        if (spec.heads[h].pure_equality) head_eq_at[spec.heads[h].last_var + 1].push_back(static_cast<int>(h));

      auto decided = [&](int depth) {
        for (int i : body_eq_at[depth]) {
          const auto& a = spec.body[i];
          if (arg_value(a.args[0], vals) != arg_value(a.args[1], vals)) return true;
        }
        for (int h : head_eq_at[depth]) {
          bool all = true;
          for (const auto& a : spec.heads[h].atoms)
            if (arg_value(a.args[0], vals) != arg_value(a.args[1], vals)) all = false;
          if (all) return true;
        }
        return false;
      };

      std::function<void(int)> rec = [&](int depth) {
        if (!ok) return;
        if (decided(depth)) return;
        if (depth < spec.num_vars) {
          for (Element e = 0; e < n_; ++e) {
            vals[depth] = e;
            rec(depth + 1);
          }
          return;
        }
        emit(spec, vals, seen, ok);
      };
      rec(0);
      if (!ok) return false;
    }
    const std::size_t ni = inst_body_first_.size() - 1;
    body_true_.assign(ni, 0);
    body_false_.assign(ni, 0);
    live_.resize(ni);
    for (std::size_t i = 0; i < ni; ++i) live_[i] = inst_opt_first_[i + 1] - inst_opt_first_[i];
    opt_true_.assign(opt_inst_.size(), 0);
    opt_false_.assign(opt_inst_.size(), 0);
    return true;
  }

  void emit(const GroundSpec& spec, std::vector<Element>& vals, std::unordered_set<std::vector<int>, VecHash>& seen,
            bool& ok) {
    std::vector<int> body;
    Tuple tup;
    for (const auto& a : spec.body) {
      if (a.rel < 0) continue;
      tup.clear();
      for (int arg : a.args) tup.push_back(arg_value(arg, vals));
      body.push_back(atom_id(a.rel, tup));
    }
    std::sort(body.begin(), body.end());
    body.erase(std::unique(body.begin(), body.end()), body.end());
    std::vector<std::vector<int>> options;
    const int u = spec.universal;
    for (const auto& h : spec.heads) {
      // Universal variables keep their values; the head's own variables follow.
      std::vector<Element> hv(vals.begin(), vals.begin() + u);
      const int own_start = u;
      hv.resize(u + h.own_vars, 0);
      std::function<bool(int)> each = [&](int i) -> bool {
        if (i < h.own_vars) {
          for (Element e = 0; e < n_; ++e) {
            hv[own_start + i] = e;
            if (!each(i + 1)) return false;
          }
          return true;
        }
        std::vector<int> opt;
        for (const auto& a : h.atoms) {
          if (a.rel < 0) {
            if (arg_value(a.args[0], hv) != arg_value(a.args[1], hv)) return true;
            continue;
          }
          tup.clear();
          for (int arg : a.args) tup.push_back(arg_value(arg, hv));
          opt.push_back(atom_id(a.rel, tup));
        }
        std::sort(opt.begin(), opt.end());
        opt.erase(std::unique(opt.begin(), opt.end()), opt.end());
        if (std::includes(body.begin(), body.end(), opt.begin(), opt.end())) return false;  // satisfied
        options.push_back(std::move(opt));
        return true;
      };
      if (!each(0)) return;
    }
    std::sort(options.begin(), options.end());
    options.erase(std::unique(options.begin(), options.end()), options.end());
    if (body.empty() && options.empty()) {
      ok = false;
      return;
    }
    std::vector<int> key = body;
    key.push_back(-1);
    for (const auto& o : options) {
      key.insert(key.end(), o.begin(), o.end());
      key.push_back(-2);
    }
    if (!seen.insert(std::move(key)).second) return;
    const int inst = static_cast<int>(inst_body_first_.size()) - 1;
    for (int a : body) {
      body_atoms_.push_back(a);
      occ_[a].push_back(inst << 1);
    }
    inst_body_first_.push_back(static_cast<int>(body_atoms_.size()));
    for (const auto& o : options) {
      const int g = static_cast<int>(opt_inst_.size());
      opt_inst_.push_back(inst);
      for (int a : o) {
        opt_atoms_.push_back(a);
        occ_[a].push_back((g << 1) | 1);
      }
      opt_atom_first_.push_back(static_cast<int>(opt_atoms_.size()));
    }
    inst_opt_first_.push_back(static_cast<int>(opt_inst_.size()));
  }

  void assign(int atom, bool val) {
    value_[atom] = val ? 1 : 0;
    trail_.push_back(atom);
    ++assigned_;
    for (int code : occ_[atom]) {
      const int id = code >> 1;
      if ((code & 1) == 0) {
        if (val) {
          ++body_true_[id];
          queue_.push_back(id);
        } else {
          ++body_false_[id];
        }
      } else if (val) {
        ++opt_true_[id];
      } else if (++opt_false_[id] == 1) {
        --live_[opt_inst_[id]];
        queue_.push_back(opt_inst_[id]);
      }
    }
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const int atom = trail_.back();
      trail_.pop_back();
      const bool val = value_[atom] == 1;
      value_[atom] = -1;
      --assigned_;
      for (int code : occ_[atom]) {
        const int id = code >> 1;
        if ((code & 1) == 0) {
          if (val) {
            --body_true_[id];
          } else {
            --body_false_[id];
          }
        } else if (val) {
          --opt_true_[id];
        } else if (--opt_false_[id] == 0) {
          ++live_[opt_inst_[id]];
        }
      }
    }
    queue_.clear();
  }

  // Returns false on conflict.
  bool set(int atom, bool val) {
    if (value_[atom] >= 0) return (value_[atom] == 1) == val;
    assign(atom, val);
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      const int inst = queue_.back();
      queue_.pop_back();
      if (body_false_[inst] > 0) continue;
      const int bsize = inst_body_first_[inst + 1] - inst_body_first_[inst];
      if (body_true_[inst] == bsize) {
        if (live_[inst] == 0) {
          queue_.clear();
          return false;
        }
        if (live_[inst] == 1) {
          for (int g = inst_opt_first_[inst]; g < inst_opt_first_[inst + 1]; ++g) {
            if (opt_false_[g] != 0) continue;
            for (int k = opt_atom_first_[g]; k < opt_atom_first_[g + 1]; ++k) set(opt_atoms_[k], true);
            break;
          }
        }
      } else if (live_[inst] == 0 && body_true_[inst] == bsize - 1) {
        for (int k = inst_body_first_[inst]; k < inst_body_first_[inst + 1]; ++k) {
          if (value_[body_atoms_[k]] < 0) {
            set(body_atoms_[k], false);
            break;
          }
        }
      }
    }
    return true;
  }

  void leaf() {
    ++stats_.leaves;
    std::vector<std::vector<Tuple>> tables(t_.signature().relations().size());
    for (int a = 0; a < total_; ++a)
      if (value_[a] == 1) tables[atom_rel_[a]].push_back(atom_tuple_[a]);
    FiniteStructure s(t_.signature(), n_, std::move(tables), consts_);
    auto lab = canonical_labeling(s);
    if (found_.count(lab.code)) return;
    std::vector<Element> old_to_new(n_);
    for (int p = 0; p < n_; ++p) old_to_new[lab.order[p]] = p;
    found_.emplace(lab.code, relabel(s, old_to_new));
  }

  void search(std::vector<bool>& fresh) {
    if (assigned_ == total_) {
      leaf();
      return;
    }
    if (opt_.budget && stats_.decisions >= opt_.budget) {
      throw BudgetExceeded("model search exceeded its budget of " + std::to_string(opt_.budget) +
                           " decisions at size " + std::to_string(n_));
    }
    ++stats_.decisions;
    int alpha = -1;
    for (int a : level_order_) {
      if (value_[a] < 0) {
        alpha = a;
        break;
      }
    }
    // Move the fresh elements of alpha onto the smallest fresh elements.
    const int rel = atom_rel_[alpha];
    Tuple tup = atom_tuple_[alpha];
    std::vector<Element> fresh_list;
    for (Element e = 0; e < n_; ++e)
      if (fresh[e]) fresh_list.push_back(e);
    std::vector<Element> used;  // distinct fresh elements of alpha in order of appearance
    for (Element e : tup)
      if (fresh[e] && std::find(used.begin(), used.end(), e) == used.end()) used.push_back(e);
    std::vector<int> slot(tup.size(), -1);
    for (std::size_t i = 0; i < tup.size(); ++i) {
      auto it = std::find(used.begin(), used.end(), tup[i]);
      if (it != used.end()) slot[i] = static_cast<int>(it - used.begin());
    }
    Tuple rep = tup;
    for (std::size_t i = 0; i < tup.size(); ++i)
      if (slot[i] >= 0) rep[i] = fresh_list[slot[i]];
    const int rep_atom = atom_id(rel, rep);

    const std::size_t mark = trail_.size();
    // Branch 1: the representative holds.
    assign(rep_atom, true);
    if (propagate()) {
      std::vector<bool> next = fresh;
      for (std::size_t j = 0; j < used.size(); ++j) next[fresh_list[j]] = false;
      search(next);
    }
    undo(mark);

    // Branch 2: every atom of the orbit fails.
    bool ok = true;
    std::vector<Element> image(used.size());
    std::vector<bool> taken(n_, false);
    Tuple img = tup;
    std::function<void(std::size_t)> orbit = [&](std::size_t j) {
      if (!ok) return;
      if (j == used.size()) {
        for (std::size_t i = 0; i < tup.size(); ++i) img[i] = slot[i] >= 0 ? image[slot[i]] : tup[i];
        if (!set(atom_id(rel, img), false)) ok = false;
        return;
      }
      for (Element e : fresh_list) {
        if (taken[e]) continue;
        taken[e] = true;
        image[j] = e;
        orbit(j + 1);
        taken[e] = false;
      }
    };
    orbit(0);
    if (ok && propagate()) search(fresh);
    undo(mark);
  }
};

void constant_patterns(int nconst, int n, std::vector<Element>& cur, int next_new,
                       std::vector<std::vector<Element>>& out) {
  if (static_cast<int>(cur.size()) == nconst) {
    out.push_back(cur);
    return;
  }
  for (Element e = 0; e <= next_new && e < n; ++e) {
    cur.push_back(e);
    constant_patterns(nconst, n, cur, e == next_new ? next_new + 1 : next_new, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<FiniteStructure> find_models(const Theory& t, int size, const FinderOptions& opt, FinderStats* stats) {
  if (size < 1) throw std::invalid_argument("universe size must be at least 1");
  FinderStats local;
  FinderStats& st = stats ? *stats : local;
  const auto specs = compile_theory(t);
  std::vector<std::vector<Element>> patterns;
  std::vector<Element> cur;
  constant_patterns(static_cast<int>(t.signature().constants().size()), size, cur, 0, patterns);
  std::map<std::string, FiniteStructure> found;
  const std::uint64_t start = st.decisions;
  for (const auto& consts : patterns) {
    FinderOptions o = opt;
    if (o.budget) o.budget += start;
    Solver(t, specs, size, consts, o, st, found).run();
  }
  std::vector<FiniteStructure> out;
  for (auto& [code, s] : found) out.push_back(std::move(s));
  return out;
}

}  // namespace posmod
