#include "periods/catalog.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace periods {

namespace fs = std::filesystem;

std::string data_dir() {
    if (const char* env = std::getenv("PERIODS_DATA")) return env;
    if (fs::exists("data/catalog")) return "data";
    std::string src = std::string(PERIODS_SOURCE_DIR) + "/data";
    if (fs::exists(src + "/catalog")) return src;
    throw InputError("catalog data directory not found (set PERIODS_DATA)");
}

namespace {

Rat parse_rat(const std::string& s) {
    Rat r(s);
    r.canonicalize();
    return r;
}

std::vector<Rat> parse_rats(std::istringstream& in) {
    std::vector<Rat> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_rat(tok));
    return out;
}

PointP1 parse_point(const std::string& tok) {
    if (tok == "inf") return PointP1::infinity();
    if (tok.rfind("alg:", 0) == 0) {
        size_t c1 = tok.find(':', 4);
        std::string coeffs = tok.substr(4, c1 - 4);
        double approx = std::stod(tok.substr(c1 + 1));
        std::vector<Rat> cs;
        std::istringstream cin(coeffs);
        std::string piece;
        while (std::getline(cin, piece, ',')) cs.push_back(parse_rat(piece));
        return PointP1::algebraic({RatPoly(std::move(cs)), approx});
    }
    return PointP1::rational(parse_rat(tok));
}

} // namespace

WeierstrassSurface parse_surface_record(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<Rat> g2, g3;
    long k = 1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "k") ls >> k;
        else if (key == "g2" || key == "g2_1") g2 = parse_rats(ls);
        else if (key == "g3" || key == "g3_1") g3 = parse_rats(ls);
    }
    if (g2.empty() || g3.empty()) throw InputError("surface record needs g2 and g3 lines");
    WeierstrassSurface s(RatPoly(std::move(g2)), RatPoly(std::move(g3)), k);
    s.classify();
    return s;
}

ExampleSpec load_example(const std::string& id) {
    fs::path file = fs::path(data_dir()) / "catalog" / (id + ".txt");
    std::ifstream in(file);
    if (!in) throw InputError("no catalog entry '" + id + "' (" + file.string() + ")");
    ExampleSpec ex;
    std::vector<Rat> g2_1, g3_1, g2_2, g3_2;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "id") ls >> ex.id;
        else if (key == "type") {
            std::string t;
            ls >> t;
            ex.type = t == "I" ? 'I' : (t == "II" ? '2' : '3');
        } else if (key == "k") ls >> ex.k;
        else if (key == "self") { int v; ls >> v; ex.self_product = v != 0; }
        else if (key == "mobius") { /* informational record of the pullback map */ }
        else if (key == "g2_1") g2_1 = parse_rats(ls);
        else if (key == "g3_1") g3_1 = parse_rats(ls);
        else if (key == "g2_2") g2_2 = parse_rats(ls);
        else if (key == "g3_2") g3_2 = parse_rats(ls);
        else if (key == "fiber") {
            std::string tok;
            RefFiber f;
            ls >> tok >> f.n1 >> f.n2;
            f.location = parse_point(tok);
            ex.fibers.push_back(std::move(f));
        } else if (key == "xhat") {
            RefComplex c;
            ls >> c.re >> c.im;
            ex.ref_xhat.push_back(std::move(c));
        } else if (key == "x") {
            RefComplex c;
            ls >> c.re >> c.im;
            ex.ref_x.push_back(std::move(c));
        } else if (key == "modular") {
            ModularData m;
            ls >> m.label;
            ex.modular = std::move(m);
        } else if (key == "pw1") {
            ls >> ex.modular->pw1_re >> ex.modular->pw1_im;
        } else if (key == "pw2") {
            ls >> ex.modular->pw2_re >> ex.modular->pw2_im;
        } else if (key == "combo") {
            std::string a, b, c, d;
            ls >> a >> b >> c >> d;
            ex.modular->combos.push_back({parse_rat(a), parse_rat(b), parse_rat(c), parse_rat(d)});
        } else if (key == "index") {
            std::string v;
            ls >> v;
            ex.generic_index = Int(v);
        } else if (key == "rhat" || key == "rvec") {
            size_t n;
            RefComplex c;
            ls >> n >> c.re >> c.im;
            auto& dst = key == "rhat" ? ex.rhat : ex.rvec;
            if (dst.size() <= n) dst.resize(n + 1);
            dst[n].push_back(std::move(c));
        }
    }
    ex.s1 = WeierstrassSurface(RatPoly(std::move(g2_1)), RatPoly(std::move(g3_1)), ex.k);
    ex.s1.classify();
    if (ex.self_product) {
        ex.s2 = ex.s1;
    } else {
        ex.s2 = WeierstrassSurface(RatPoly(std::move(g2_2)), RatPoly(std::move(g3_2)), ex.k);
        ex.s2.classify();
    }
    return ex;
}

std::vector<ExampleSpec> list_examples() {
    static const char* ids[] = {
        "typeI-2244",     "typeI-1128",     "typeI-1155",      "typeI-1236",
        "type2-swap-ae",  "type2-swap-be",  "type2-swap-bc",   "type2-cycle-bec",
        "type2-cycle-cea", "x1-7",          "x1-8",            "x1-10",
    };
    std::vector<ExampleSpec> out;
    for (const char* id : ids) out.push_back(load_example(id));
    return out;
}

Section4Tables load_section4_tables() {
    fs::path file = fs::path(data_dir()) / "section4_tables.txt";
    std::ifstream in(file);
    if (!in) throw InputError("missing " + file.string());
    Section4Tables t;
    t.q.resize(5);
    t.r.resize(5);
    t.M.assign(5, IntMat(4, 4));
    t.Theta.assign(5, IntMat(4, 4));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        size_t idx;
        ls >> key >> idx;
        if (key == "q" || key == "r") {
            RefComplex c;
            ls >> c.re >> c.im;
            (key == "q" ? t.q : t.r)[idx].push_back(std::move(c));
        } else {
            IntMat& m = (key == "M" ? t.M : t.Theta)[idx];
            for (size_t i = 0; i < 4; i++)
                for (size_t j = 0; j < 4; j++) {
                    std::string v;
                    ls >> v;
                    m(i, j) = Int(v);
                }
        }
    }
    return t;
}

} // namespace periods
