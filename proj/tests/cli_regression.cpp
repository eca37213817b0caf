// Black-box checks of the adelic-orbit executable: pinned outputs, exit
// codes, determinism and the JSON round-trip guarantee.  The binary path
// arrives as argv[1].
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "json.hpp"

namespace {

std::string g_binary;
int g_failures = 0;

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = g_binary + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        std::cerr << "popen failed for: " << cmd << "\n";
        std::exit(2);
    }
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int rc = pclose(p);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

void expect(bool ok, const std::string& what) {
    if (ok) {
        std::cout << "[ok] " << what << "\n";
    } else {
        std::cout << "[FAIL] " << what << "\n";
        ++g_failures;
    }
}

void expect_eq(const std::string& got, const std::string& want, const std::string& what) {
    if (got == want) {
        std::cout << "[ok] " << what << "\n";
    } else {
        std::cout << "[FAIL] " << what << "\n  want: " << want << "\n  got:  " << got
                  << "\n";
        ++g_failures;
    }
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_regression <path-to-adelic-orbit>\n";
        return 2;
    }
    g_binary = argv[1];
    using nlohmann::json;

    // pinned byte-exact outputs
    {
        RunResult r = run("--field d=-5 classgroup");
        expect(r.status == 0, "classgroup exits 0");
        expect_eq(r.out,
                  "{\"h\":2,\"classes\":[\"(1, 0, 5)\",\"(2, 2, 3)\"],\"identity\":0,"
                  "\"table\":[[0,1],[1,0]]}\n",
                  "classgroup d=-5 bytes");
    }
    {
        RunResult r = run("--field Q stabilizer --point '{\"r\":{\"global\":\"0\"},\"a\":\"unit\"}'");
        expect(r.status == 0, "stabilizer exits 0");
        expect(contains(r.out, "\"tag\":\"FullAffineOverR\""), "stabilizer tag");
        expect(contains(r.out, "\"conjugator\":{\"x\":\"0\",\"k\":\"1\"}"),
               "stabilizer conjugator");
    }
    {
        RunResult r = run("--field d=-1 factor --element 84/5");
        expect(r.status == 0, "factor exits 0");
        expect(contains(r.out, "\"norm\":\"7056/25\""), "factor norm");
        expect(contains(r.out, "{\"prime\":\"P5\",\"exp\":-1}"), "factor denominator prime");
    }

    // every remaining subcommand answers with its documented shape
    {
        RunResult r = run("--field d=-1 units");
        expect_eq(r.out, "{\"count\":4,\"units\":[\"1\",\"w\",\"-w\",\"-1\"]}\n", "units d=-1");
        r = run("--field d=-5 valuation --element 1+w --prime P2");
        expect_eq(r.out, "{\"element\":\"1+w\",\"prime\":\"P2\",\"valuation\":1}\n",
                  "valuation of 1+w at P2");
        r = run("--field d=-5 cofactor --primes P3 --exps 1");
        expect_eq(r.out, "{\"prime\":\"P2\",\"k\":\"1+w\"}\n", "cofactor of P3");
        r = run("--field Q closure --base '{\"r\":\"0\",\"a\":\"unit\"}' "
                "--target '{\"r\":\"0\",\"a\":\"zero\"}'");
        expect(r.status == 0 && contains(r.out, "\"contains\":true"), "closure verdict");
        r = run("--field Q approx --base '{\"r\":\"0\",\"a\":\"unit\"}' "
                "--nbhd '{\"target\":{\"r\":\"0\",\"a\":{\"element\":\"2\"}},"
                "\"exact\":[{\"prime\":\"P2\",\"exp\":1}]}'");
        expect(r.status == 0 && contains(r.out, "\"g\":{\"x\":\"0\",\"k\":\"2\"}"),
               "approx move");
        expect(contains(r.out,
                        "second coordinate at P2: exponent 1, required exactly 1 [ok]"),
               "approx transcript");
        r = run("--field Q trivial-point --zero-set '(finite \"P2\")'");
        expect(r.status == 0 && contains(r.out, "\"stabilizerTag\":\"Trivial\""),
               "trivial-point tag");
        expect(contains(r.out, "\"zeroSet\":\"(finite \\\"P2\\\")\""),
               "trivial-point zero set");
        r = run("--field Q witness");
        expect(r.status == 0 && contains(r.out, "\"zeroSet\":\"empty\"") &&
                   contains(r.out, "\"stabilizerTag\":\"Trivial\""),
               "witness is free with empty vanishing set");
        r = run("--field Q ideal --a 'empty' --b '(finite \"P2\")'");
        expect_eq(r.out,
                  "{\"a\":\"empty\",\"aMaximal\":false,\"b\":\"(finite \\\"P2\\\")\","
                  "\"bMaximal\":false,\"leq\":true,\"geq\":false,\"equal\":false}\n",
                  "ideal order bytes");
        r = run("--field Q ideal --open-a '{\"gens\":[[\"P2\"]]}' "
                "--open-b '{\"gens\":[[\"P3\"]]}'");
        expect(r.status == 0 &&
                   contains(r.out, "\"meet\":{\"gens\":[[\"P2\",\"P3\"]]}") &&
                   contains(r.out, "\"join\":{\"gens\":[[\"P2\"],[\"P3\"]]}"),
               "open-set lattice");
    }

    // determinism: identical invocations give identical bytes
    {
        RunResult a = run("--field d=-23 classgroup");
        RunResult b = run("--field d=-23 classgroup");
        expect(a.status == 0 && a.out == b.out, "classgroup deterministic");
        RunResult c = run("--field Q --seed 7 selftest --serial");
        RunResult d = run("--field Q --seed 7 selftest --serial");
        expect(c.status == 0, "selftest exits 0");
        expect(c.out == d.out, "selftest deterministic at fixed seed");
        json js = json::parse(c.out);
        expect(js.at("passed").get<bool>(), "selftest passed");
        expect(js.at("suites").size() == 18, "selftest suite count");
    }

    // JSON round trip: a point emitted by one command is accepted by the next
    {
        RunResult r = run(
            "--field Q act --g '{\"x\":\"1/2\",\"k\":\"3\"}' "
            "--point '{\"r\":{\"global\":\"1\"},\"a\":\"unit\"}'");
        expect(r.status == 0, "act exits 0");
        json ja = json::parse(r.out);
        std::string point = ja.at("result").dump();
        RunResult q = run("--field Q quasiorbit --point '" + point + "'");
        expect(q.status == 0, "quasiorbit accepts act output");
        json jq = json::parse(q.out);
        expect(jq.at("zeroSet").get<std::string>() == "empty", "round-tripped zero set");
        expect(jq.at("point").dump() == point, "round-tripped point unchanged");
    }

    // pretty output is still one valid JSON document
    {
        RunResult r = run("--field Q --pretty field-info");
        expect(r.status == 0, "pretty field-info exits 0");
        json jp = json::parse(r.out);
        expect(jp.at("kind").get<std::string>() == "rational", "pretty parses");
        expect(contains(r.out, "\n  \"kind\""), "pretty is indented");
    }

    // exit codes: usage errors are 2, domain failures are 1
    {
        RunResult r = run("--field Q --search-bound 5 field-info");
        expect(r.status == 2, "small search bound exits 2");
        r = run("--field Q --refinement-cap 10 field-info");
        expect(r.status == 2, "small refinement cap exits 2");
        r = run("--field Q factor --element 0");
        expect(r.status == 1, "factoring zero exits 1");
        json je = json::parse(r.out);
        expect(je.at("error").at("type").get<std::string>() == "domain",
               "factoring zero reports a domain error");
        r = run("--field Q act --g 'not json' --point '{\"r\":\"0\",\"a\":\"unit\"}'");
        expect(r.status == 2, "malformed payload exits 2");
        expect(contains(r.out, "--g"), "malformed payload names the option");
        r = run("--field d=7 field-info");
        expect(r.status == 2, "positive discriminant exits 2");
    }

    // cache: the environment variable selects the file and a run creates it
    {
        std::string path = "cli_regression_cache.json";
        std::remove(path.c_str());
        std::string saved = g_binary;
        g_binary = "ADELIC_ORBIT_CACHE=" + path + " " + saved;
        RunResult r = run("--field d=-23 classgroup");
        g_binary = saved;
        expect(r.status == 0, "cached run exits 0");
        FILE* f = std::fopen(path.c_str(), "r");
        expect(f != nullptr, "cache file created from environment");
        if (f) {
            std::string body;
            char buf[4096];
            size_t n;
            while ((n = fread(buf, 1, sizeof buf, f)) > 0) body.append(buf, n);
            std::fclose(f);
            expect(contains(body, "adelic-orbit/cache-v1"), "cache file is versioned");
        }
        std::remove(path.c_str());
    }

    if (g_failures == 0) {
        std::cout << "cli_regression: all checks passed\n";
        return 0;
    }
    std::cout << "cli_regression: " << g_failures << " check(s) failed\n";
    return 1;
}
