from partrace.harness.cli import main

main()
