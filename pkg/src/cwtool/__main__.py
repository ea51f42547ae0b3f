from cwtool.cli import main

main()
