from polydit.cli import main

raise SystemExit(main())
