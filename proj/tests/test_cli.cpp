#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "dkap/cli.hpp"

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = dkap::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("eval prints exact values") {
    const auto r = run({"eval", "4", "--k", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "d_k=3 d_k*=2 D_k=3/2 g_k=1/2\n");
    CHECK(run({"eval", "12", "--k", "3"}).out == "d_k=18 d_k*=9 D_k=2 g_k=0\n");
}

TEST_CASE("sum in each mode") {
    auto r = run({"sum", "--x", "10", "--k", "2", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out.find("mode,x,k,q,a,exact,approx,approx_error_bound,main_term,residual\n") == 0);
    CHECK(r.out.find("full,10,2,1,,12,12,") != std::string::npos);
    r = run({"sum", "--x", "10", "--k", "2", "--q", "2"});
    CHECK(r.out.find("exact=11/2") != std::string::npos);
    r = run({"sum", "--x", "10", "--k", "2", "--q", "3", "--a", "1"});
    CHECK(r.out.find("exact=9/2") != std::string::npos);
    CHECK(r.out.find("main_term=4.39278919") != std::string::npos);
}

TEST_CASE("coeff and characters") {
    auto r = run({"coeff", "--k", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("A_k=1.42765648704461") != std::string::npos);
    r = run({"--format", "json", "coeff", "--k", "2", "--q", "3"});
    CHECK(r.out.find("\"G_k_over_phi\": 0.43927891909") != std::string::npos);
    r = run({"characters", "--q", "4", "--format", "csv"});
    CHECK(r.out == "char_index,n,value_re,value_im\n0,1,1,0\n0,2,0,0\n0,3,1,0\n0,4,0,0\n"
                   "1,1,1,0\n1,2,0,0\n1,3,-1,0\n1,4,0,0\n");
}

TEST_CASE("exit codes") {
    CHECK(run({"sum", "--x", "10", "--k", "2", "--q", "4", "--a", "2"}).code == 1);
    CHECK(run({"eval", "4", "--k", "1"}).code == 1);
    CHECK(run({"eval", "4", "--k", "65"}).code == 1);
    CHECK(run({"sum", "--x", "10", "--k", "2", "--bogus"}).code == 1);
    CHECK(run({}).code == 1);
    const auto r = run({"sum", "--x", "10", "--k", "2", "--a", "1"});
    CHECK(r.code == 1);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("table output is stable across runs") {
    const auto a = run({"--prime-limit", "1000", "table", "a", "--format", "csv"});
    CHECK(a.code == 0);
    CHECK(a.out == run({"--prime-limit", "1000", "table", "a", "--format", "csv"}).out);
    CHECK(a.out.find("k,computed,reference,abs_diff,pass\n") == 0);
}
