#include "hug/bank_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hug/binary_io.hpp"

namespace hug::io {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_line(std::istream& is, const char* what) {
    std::string line;
    if (!std::getline(is, line)) throw DataError(std::string("model bank truncated before ") + what);
    return line;
}

template <typename T>
T field(std::istream& is, const char* key) {
    std::istringstream ls(read_line(is, key));
    std::string k;
    T v{};
    if (!(ls >> k >> v) || k != key) throw DataError(std::string("model bank: expected '") + key + "'");
    return v;
}

void put_all(BinaryWriter& w, const std::vector<double>& v) { w.put_bytes(v.data(), v.size() * sizeof(double)); }

void get_all(BinaryReader& r, std::vector<double>& v, const char* what) { r.get_bytes(v.data(), v.size() * sizeof(double), what); }

void check_rows(const double* v, std::size_t n, const char* what) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(v[i] >= 0.0) || !std::isfinite(v[i])) throw DataError(std::string("model bank: invalid probability in ") + what);
        s += v[i];
    }
    if (std::abs(s - 1.0) > 1e-6) throw DataError(std::string("model bank: ") + what + " does not sum to 1");
}

}  // namespace

void write_bank(std::ostream& os, const hmm::ClassifierBank& bank) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "0x%016" PRIx64, bank.dictionary_hash);
    os << "HUGM " << kBankVersion << '\n';
    os << "classes " << bank.models.size() << '\n';
    os << "alphabet " << bank.alphabet << '\n';
    os << "dictionary_hash " << hash << '\n';
    os << "iterations " << bank.iterations << '\n';
    os << "smoothing " << fmt_double(bank.smoothing) << '\n';
    os << "seed " << bank.seed << '\n';
    os << "fold " << (bank.fold.empty() ? "all" : bank.fold) << '\n';
    for (std::size_t n = 0; n < bank.models.size(); ++n) {
        os << "class " << n << ' ' << class_name(bank.models[n].gesture) << ' ' << bank.models[n].states << '\n';
    }
    os << "data\n";
    BinaryWriter w(os);
    put_all(w, bank.priors);
    for (const auto& m : bank.models) {
        put_all(w, m.pi);
        put_all(w, m.A.data());
        put_all(w, m.phi.data());
    }
    if (!w.ok()) throw DataError("failed writing model bank");
}

hmm::ClassifierBank read_bank(std::istream& is) {
    hmm::ClassifierBank bank;
    {
        std::istringstream ls(read_line(is, "magic"));
        std::string magic;
        int version = 0;
        if (!(ls >> magic >> version) || magic != "HUGM") throw DataError("not a model bank");
        if (version != kBankVersion) throw DataError("unsupported model bank version " + std::to_string(version));
    }
    const auto classes = field<std::size_t>(is, "classes");
    bank.alphabet = field<std::size_t>(is, "alphabet");
    {
        std::istringstream ls(read_line(is, "dictionary_hash"));
        std::string k, v;
        if (!(ls >> k >> v) || k != "dictionary_hash") throw DataError("model bank: expected 'dictionary_hash'");
        try {
            bank.dictionary_hash = std::stoull(v, nullptr, 16);
        } catch (const std::logic_error&) {
            throw DataError("model bank: bad dictionary hash");
        }
    }
    bank.iterations = field<std::size_t>(is, "iterations");
    bank.smoothing = field<double>(is, "smoothing");
    bank.seed = field<std::uint64_t>(is, "seed");
    bank.fold = field<std::string>(is, "fold");
    if (classes == 0 || classes > kClassCount) throw DataError("model bank: bad class count");
    if (bank.alphabet == 0 || bank.alphabet > (1u << 24)) throw DataError("model bank: bad alphabet size");

    bank.models.resize(classes);
    for (std::size_t n = 0; n < classes; ++n) {
        std::istringstream ls(read_line(is, "class"));
        std::string k, name;
        std::size_t idx = 0, states = 0;
        if (!(ls >> k >> idx >> name >> states) || k != "class" || idx != n)
            throw DataError("model bank: bad class line " + std::to_string(n));
        auto gc = parse_class(name);
        if (!gc) throw DataError("model bank: unknown class '" + name + "'");
        if (states == 0 || states > 4096) throw DataError("model bank: bad state count");
        auto& m = bank.models[n];
        m.gesture = *gc;
        m.states = states;
        m.alphabet = bank.alphabet;
        m.dictionary_hash = bank.dictionary_hash;
    }
    if (read_line(is, "data") != "data") throw DataError("model bank: expected 'data'");

    BinaryReader r(is, static_cast<std::uint64_t>(is.tellg()));
    bank.priors.resize(classes);
    get_all(r, bank.priors, "priors");
    check_rows(bank.priors.data(), classes, "priors");
    for (auto& m : bank.models) {
        m.pi.resize(m.states);
        get_all(r, m.pi, "pi");
        m.A = Matrix<double>(m.states, m.states);
        get_all(r, m.A.data(), "A");
        m.phi = Matrix<double>(m.states, m.alphabet);
        get_all(r, m.phi.data(), "phi");
        check_rows(m.pi.data(), m.states, "pi");
        for (std::size_t i = 0; i < m.states; ++i) {
            check_rows(m.A.row(i), m.states, "A");
            check_rows(m.phi.row(i), m.alphabet, "phi");
        }
    }
    if (is.peek() != std::char_traits<char>::eof()) throw DataError("model bank: trailing bytes");
    return bank;
}

void save_bank(const std::filesystem::path& path, const hmm::ClassifierBank& bank) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot write " + path.string());
    write_bank(os, bank);
    os.close();
    if (!os) throw DataError("failed writing " + path.string());
}

hmm::ClassifierBank load_bank(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open " + path.string());
    try {
        return read_bank(is);
    } catch (const Error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace hug::io
