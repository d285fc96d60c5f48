#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"
int main(int argc, char** argv) { doctest::Context ctx; ctx.applyCommandLine(1, argv); return ctx.run(); }
