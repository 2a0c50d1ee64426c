#include "posmod/semantics.hpp"

#include <algorithm>
#include <stdexcept>

#include "posmod/normal_form.hpp"

namespace posmod {

std::string format_assignment(const Assignment& asg) {
  std::string out = "(";
  for (std::size_t i = 0; i < asg.size(); ++i) {
    if (i) out += ' ';
    out += asg[i].first + "=" + std::to_string(asg[i].second);
  }
  return out + ")";
}

namespace {

struct Evaluator {
  const FiniteStructure& a;
  Assignment env;

  Element value(const Term& t) const {
    if (!t.is_variable()) {
      auto c = a.signature().constant_index(t.name);
      if (!c) throw SignatureMismatch("unknown constant '" + t.name + "'");
      return a.constant_value(*c);
    }
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == t.name) return it->second;
    throw std::invalid_argument("unassigned free variable '" + t.name + "'");
  }

  bool run(const PositiveFormula& f) {
    using K = PositiveFormula::Kind;
    switch (f.kind()) {
      case K::Truth:
        return true;
      case K::Falsity:
        return false;
      case K::Equality:
        return value(f.args()[0]) == value(f.args()[1]);
      case K::Atom: {
        auto r = a.signature().relation_index(f.relation());
        if (!r || a.signature().relations()[*r].arity != static_cast<int>(f.args().size())) {
          throw SignatureMismatch("relation '" + f.relation() + "' is not in the structure's signature");
        }
        Tuple t;
        for (const auto& arg : f.args()) t.push_back(value(arg));
        return a.holds(*r, t);
      }
      case K::And:
        for (const auto& c : f.children())
          if (!run(c)) return false;
        return true;
      case K::Or:
        for (const auto& c : f.children())
          if (run(c)) return true;
        return false;
      case K::Exists:
        return exists(f.bound(), 0, f.body());
    }
    return false;
  }

  bool exists(const std::vector<std::string>& vars, std::size_t i, const PositiveFormula& body) {
    if (i == vars.size()) return run(body);
    env.emplace_back(vars[i], 0);
    for (Element e = 0; e < a.size(); ++e) {
      env.back().second = e;
      if (exists(vars, i + 1, body)) {
        env.pop_back();
        return true;
      }
    }
    env.pop_back();
    return false;
  }
};

}  // namespace

bool eval(const FiniteStructure& a, const PositiveFormula& f, const Assignment& asg) {
  Evaluator ev{a, asg};
  return ev.run(f);
}

SatisfactionResult satisfies(const FiniteStructure& a, const Theory& t) {
  if (!(a.signature() == t.signature())) throw SignatureMismatch("structure and theory signatures differ");
  const auto& sig = t.signature();
  for (const auto& ax : t.axioms()) {
    const auto& s = ax.sentence;
    std::vector<ConjunctiveQuery> heads;
    for (const auto& pp : pp_normal_form(s.conclusion)) heads.push_back(compile_pp(pp, s.vars, sig));
    std::vector<QuerySolver> head_solvers;
    for (auto& h : heads) {
      std::vector<bool> hp(h.num_vars, false);
      std::fill(hp.begin(), hp.begin() + static_cast<long>(s.vars.size()), true);
      head_solvers.emplace_back(h, hp);
    }
    bool found = false;
    std::vector<Element> worst;
    for (const auto& pp : pp_normal_form(s.premise)) {
      auto q = compile_pp(pp, s.vars, sig);
      std::vector<bool> none(q.num_vars, false);
      QuerySolver solver(q, none);
      std::vector<Element> values(q.num_vars, 0);
      solver.solve(a, values, [&](const std::vector<Element>& v) {
        std::vector<Element> universal(v.begin(), v.begin() + static_cast<long>(s.vars.size()));
        if (found && !(universal < worst)) return true;
        for (std::size_t h = 0; h < heads.size(); ++h) {
          std::vector<Element> hv(heads[h].num_vars, 0);
          std::copy(universal.begin(), universal.end(), hv.begin());
          if (head_solvers[h].satisfiable(a, hv)) return true;
        }
        found = true;
        worst = universal;
        return true;
      });
    }
    if (found) {
      SatisfactionResult r;
      r.holds = false;
      r.label = ax.label;
      for (std::size_t i = 0; i < s.vars.size(); ++i) r.assignment.emplace_back(s.vars[i], worst[i]);
      return r;
    }
  }
  return {};
}

QuerySolver::QuerySolver(const ConjunctiveQuery& q, const std::vector<bool>& pinned) : q_(q) {
  const int n = q.num_vars;
  std::vector<bool> assigned(pinned.begin(), pinned.end());
  assigned.resize(n, false);
  std::vector<bool> done(q.atoms.size(), false);
  auto ready = [&](const QueryAtom& at) {
    return std::all_of(at.args.begin(), at.args.end(), [&](int v) { return v < 0 || assigned[v]; });
  };
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    if (ready(q.atoms[i])) {
      initial_checks_.push_back(static_cast<int>(i));
      done[i] = true;
    }
  }
  for (;;) {
    int best = -1;
    int best_score = -1;
    for (int v = 0; v < n; ++v) {
      if (assigned[v]) continue;
      int score = 0;
      for (std::size_t i = 0; i < q.atoms.size(); ++i) {
        if (done[i]) continue;
        const auto& args = q.atoms[i].args;
        if (std::find(args.begin(), args.end(), v) == args.end()) continue;
        bool linked = std::any_of(args.begin(), args.end(), [&](int w) { return w < 0 || (w != v && assigned[w]); });
        score += linked ? 4 : 1;
      }
      if (score > best_score) {
        best_score = score;
        best = v;
      }
    }
    if (best < 0) break;
    assigned[best] = true;
    Step step{best, {}};
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
      if (!done[i] && ready(q.atoms[i])) {
        step.checks.push_back(static_cast<int>(i));
        done[i] = true;
      }
    }
    steps_.push_back(std::move(step));
  }
}

bool QuerySolver::check(const FiniteStructure& a, const QueryAtom& atom, const std::vector<Element>& values) const {
  Element buf[8];
  std::vector<Element> big;
  Element* args = buf;
  if (atom.args.size() > 8) {
    big.resize(atom.args.size());
    args = big.data();
  }
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    const int v = atom.args[i];
    args[i] = v >= 0 ? values[v] : a.constant_value(static_cast<std::size_t>(-v - 1));
  }
  if (atom.rel < 0) return args[0] == args[1];
  return a.holds(static_cast<std::size_t>(atom.rel), std::span<const Element>(args, atom.args.size()));
}

template <class Visit>
bool QuerySolver::descend(const FiniteStructure& a, std::size_t depth, std::vector<Element>& values,
                          Visit& visit) const {
  if (depth == steps_.size()) return visit(values);
  const Step& step = steps_[depth];
  for (Element e = 0; e < a.size(); ++e) {
    values[step.var] = e;
    bool ok = true;
    for (int c : step.checks) {
      if (!check(a, q_.atoms[c], values)) {
        ok = false;
        break;
      }
    }
    if (ok && !descend(a, depth + 1, values, visit)) return false;
  }
  return true;
}

bool QuerySolver::solve(const FiniteStructure& a, std::vector<Element>& values,
                        const std::function<bool(const std::vector<Element>&)>& visit) const {
  values.resize(q_.num_vars, 0);
  for (int c : initial_checks_)
    if (!check(a, q_.atoms[c], values)) return true;
  return descend(a, 0, values, visit);
}

bool QuerySolver::satisfiable(const FiniteStructure& a, std::vector<Element>& values) const {
  values.resize(q_.num_vars, 0);
  for (int c : initial_checks_)
    if (!check(a, q_.atoms[c], values)) return false;
  auto stop = [](const std::vector<Element>&) { return false; };
  return !descend(a, 0, values, stop);
}

}  // namespace posmod
