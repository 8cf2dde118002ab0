/** Shared doctest entry point for all unit-test binaries. */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
