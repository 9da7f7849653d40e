#include "rediv/instance_io.hpp"

#include <fstream>

namespace rediv {

namespace {

std::string qs(const Q& v) { return to_string(v); }

Q qp(const Json& j) {
    if (!j.is_string()) throw SchemaError("rationals must be \"p/q\" strings");
    try {
        return parse_q(j.get<std::string>());
    } catch (const std::exception& e) {
        throw SchemaError(e.what());
    }
}

Json pt_to_json(const Pt& p) { return Json::array({qs(p.x), qs(p.y)}); }

Pt pt_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw SchemaError("points are [x, y] pairs");
    return {qp(j[0]), qp(j[1])};
}

}  // namespace

Json piece_to_json(const PieceRegion& p) {
    Json j;
    if (const Interval* iv = std::get_if<Interval>(&p)) {
        j["type"] = "interval";
        j["lo"] = qs(iv->lo);
        j["hi"] = qs(iv->hi);
    } else if (const IntervalUnion* u = std::get_if<IntervalUnion>(&p)) {
        j["type"] = "interval_union";
        Json parts = Json::array();
        for (const Interval& iv : u->parts) parts.push_back(Json::array({qs(iv.lo), qs(iv.hi)}));
        j["parts"] = parts;
    } else if (const Rect* r = std::get_if<Rect>(&p)) {
        j["type"] = "rect";
        j["x"] = Json::array({qs(r->xlo), qs(r->xhi)});
        j["y"] = Json::array({qs(r->ylo), qs(r->yhi)});
    } else if (const ConvexPolygon* c = std::get_if<ConvexPolygon>(&p)) {
        j["type"] = "convex_polygon";
        Json pts = Json::array();
        for (const Pt& q : c->v) pts.push_back(pt_to_json(q));
        j["points"] = pts;
    } else if (const RectilinearPolygon* rp = std::get_if<RectilinearPolygon>(&p)) {
        j["type"] = "rectilinear_polygon";
        Json pts = Json::array();
        for (const Pt& q : rp->v) pts.push_back(pt_to_json(q));
        j["points"] = pts;
    }
    return j;
}

PieceRegion piece_from_json(const Json& j) {
    try {
        std::string type = j.at("type").get<std::string>();
        if (type == "interval") {
            Interval iv{qp(j.at("lo")), qp(j.at("hi"))};
            if (iv.lo > iv.hi) throw SchemaError("interval with lo > hi");
            return iv;
        }
        if (type == "interval_union") {
            std::vector<Interval> parts;
            for (const Json& p : j.at("parts")) parts.push_back({qp(p.at(0)), qp(p.at(1))});
            return IntervalUnion::of(std::move(parts));
        }
        if (type == "rect") {
            Rect r{qp(j.at("x").at(0)), qp(j.at("x").at(1)), qp(j.at("y").at(0)),
                   qp(j.at("y").at(1))};
            if (r.xlo > r.xhi || r.ylo > r.yhi) throw SchemaError("rect with reversed sides");
            return r;
        }
        if (type == "convex_polygon") {
            std::vector<Pt> pts;
            for (const Json& p : j.at("points")) pts.push_back(pt_from_json(p));
            return ConvexPolygon::of(std::move(pts));
        }
        if (type == "rectilinear_polygon") {
            std::vector<Pt> pts;
            for (const Json& p : j.at("points")) pts.push_back(pt_from_json(p));
            return RectilinearPolygon::of(std::move(pts));
        }
        throw SchemaError("unknown piece type: " + type);
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("bad piece: ") + e.what());
    } catch (const Error& e) {
        throw SchemaError(e.what());
    }
}

static Json density_to_json(const Valuation& v) {
    Json j;
    if (const Density1D* d = std::get_if<Density1D>(&v.density)) {
        j["type"] = "grid1d";
        Json b = Json::array(), vals = Json::array();
        for (const Q& x : d->breaks) b.push_back(qs(x));
        for (const Q& x : d->values) vals.push_back(qs(x));
        j["breaks"] = b;
        j["values"] = vals;
    } else {
        const Density2D& d2 = std::get<Density2D>(v.density);
        j["type"] = "grid2d";
        Json xs = Json::array(), ys = Json::array(), cells = Json::array();
        for (const Q& x : d2.xs) xs.push_back(qs(x));
        for (const Q& y : d2.ys) ys.push_back(qs(y));
        for (const auto& col : d2.cells) {
            Json c = Json::array();
            for (const Q& x : col) c.push_back(qs(x));
            cells.push_back(c);
        }
        j["xs"] = xs;
        j["ys"] = ys;
        j["cells"] = cells;
    }
    return j;
}

static Valuation density_from_json(const Json& j, const PieceRegion& cake) {
    try {
        std::string type = j.at("type").get<std::string>();
        if (type == "grid1d") {
            Density1D d;
            for (const Json& x : j.at("breaks")) d.breaks.push_back(qp(x));
            for (const Json& x : j.at("values")) d.values.push_back(qp(x));
            return Valuation::over(std::move(d), cake);
        }
        if (type == "grid2d") {
            Density2D d;
            for (const Json& x : j.at("xs")) d.xs.push_back(qp(x));
            for (const Json& y : j.at("ys")) d.ys.push_back(qp(y));
            for (const Json& col : j.at("cells")) {
                std::vector<Q> c;
                for (const Json& x : col) c.push_back(qp(x));
                d.cells.push_back(std::move(c));
            }
            return Valuation::over(std::move(d), cake);
        }
        throw SchemaError("unknown density type: " + type);
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("bad density: ") + e.what());
    } catch (const Error& e) {
        throw SchemaError(e.what());
    }
}

Json instance_to_json(const Instance& inst) {
    Json j;
    j["version"] = 1;
    j["mode"] = mode_name(inst.mode);
    j["cake"] = piece_to_json(inst.cake);
    Json agents = Json::array();
    Json initial = Json::array();
    for (const Agent& a : inst.agents) {
        Json ja;
        ja["id"] = a.id;
        ja["role"] = a.is_old ? "old" : "young";
        ja["density"] = density_to_json(a.valuation);
        agents.push_back(ja);
        if (a.old_piece) {
            Json slot;
            slot["agent"] = a.id;
            slot["piece"] = piece_to_json(*a.old_piece);
            initial.push_back(slot);
        }
    }
    j["agents"] = agents;
    j["initial_allocation"] = initial;
    return j;
}

Instance instance_from_json(const Json& j) {
    try {
        if (j.at("version").get<int>() != 1) throw SchemaError("unsupported version");
        Instance inst;
        inst.mode = mode_from_name(j.at("mode").get<std::string>());
        inst.cake = piece_from_json(j.at("cake"));
        std::map<int, PieceRegion> initial;
        for (const Json& slot : j.at("initial_allocation"))
            initial.emplace(slot.at("agent").get<int>(), piece_from_json(slot.at("piece")));
        for (const Json& ja : j.at("agents")) {
            Agent a;
            a.id = ja.at("id").get<int>();
            std::string role = ja.at("role").get<std::string>();
            if (role != "old" && role != "young") throw SchemaError("role must be old|young");
            a.is_old = role == "old";
            a.valuation = density_from_json(ja.at("density"), inst.cake);
            if (a.is_old) {
                auto it = initial.find(a.id);
                if (it == initial.end())
                    throw SchemaError("old agent without an initial piece");
                a.old_piece = it->second;
            }
            inst.agents.push_back(std::move(a));
        }
        inst.validate();
        return inst;
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("bad instance: ") + e.what());
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw SchemaError(e.what());
    }
}

Json allocation_to_json(const Instance& inst, const Allocation& alloc) {
    Json arr = Json::array();
    for (const Agent& a : inst.agents) {
        Json row;
        row["agent"] = a.id;
        const PieceRegion* p = alloc.piece_of(a.id);
        Q v = p ? eval_raw(a.valuation, *p) : Q(0);
        if (p) row["piece"] = piece_to_json(*p);
        row["value"] = qs(v);
        row["normalized"] = qs(v / a.valuation.total);
        row["normalized_float"] = to_double(v / a.valuation.total);
        arr.push_back(row);
    }
    Json j;
    j["allocation"] = arr;
    return j;
}

Allocation allocation_from_json(const Json& j) {
    try {
        Allocation alloc;
        for (const Json& row : j.at("allocation")) {
            if (row.contains("piece"))
                alloc.pieces.emplace(row.at("agent").get<int>(), piece_from_json(row.at("piece")));
        }
        return alloc;
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("bad allocation: ") + e.what());
    }
}

Json report_to_json(const FairnessReport& rep) {
    Json j;
    Json norm = Json::array();
    for (const auto& [id, v] : rep.normalized) {
        Json row;
        row["agent"] = id;
        row["normalized"] = qs(v);
        row["normalized_float"] = to_double(v);
        norm.push_back(row);
    }
    j["normalized"] = norm;
    Json ret = Json::array();
    for (const auto& [id, r] : rep.retention) {
        Json row;
        row["agent"] = id;
        if (r) {
            row["retention"] = qs(*r);
            row["retention_float"] = to_double(*r);
        } else {
            row["retention"] = nullptr;
        }
        ret.push_back(row);
    }
    j["retention"] = ret;
    Json grad = Json::array();
    for (const GradualRow& row : rep.gradual) {
        Json g;
        g["k"] = row.k;
        g["required"] = row.required;
        g["satisfied"] = row.satisfied;
        g["ok"] = row.ok;
        grad.push_back(g);
    }
    j["gradual_retention"] = grad;
    j["welfare_utilitarian"] = qs(rep.welfare_util);
    j["welfare_utilitarian_float"] = to_double(rep.welfare_util);
    j["welfare_nash_float"] = rep.welfare_nash;
    j["eval_queries"] = rep.evals;
    j["mark_queries"] = rep.marks;
    j["blanks"] = rep.b;
    return j;
}

Json completion_to_json(const CompletionResult& res) {
    Json j;
    Json exp = Json::array(), blanks = Json::array();
    for (const PieceRegion& p : res.expanded) exp.push_back(piece_to_json(p));
    for (const PieceRegion& p : res.blanks) blanks.push_back(piece_to_json(p));
    j["expanded"] = exp;
    j["blanks"] = blanks;
    j["b"] = res.b;
    return j;
}

Instance read_instance(const std::string& path) { return instance_from_json(read_json(path)); }

void write_instance(const Instance& inst, const std::string& path) {
    write_json(instance_to_json(inst), path);
}

void write_json(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("bad JSON: ") + e.what());
    }
}

}  // namespace rediv
