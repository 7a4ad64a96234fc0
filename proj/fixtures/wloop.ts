; Worker loop: a counter w is pumped at an interior loop (pc 3..6, with a
; nondeterministic exit branch at pc 4) and drained by a second loop
; (pc 7..11) before control returns to the pump.  The interesting run keeps
; revisiting states with w >= 1.
(system
  (vars (w Int) (pc Int))
  (init (= pc 1))
  (trans
    (rule (= pc 1) ((w w) (pc 2)))
    (rule (= pc 2) ((w w) (pc 3)))
    (rule (and (= pc 3) (<= w 5)) ((w w) (pc 4)))
    (rule (and (= pc 3) (> w 5)) ((w w) (pc 5)))
    (rule (= pc 4) ((w w) (pc 5)))
    (rule (= pc 4) ((w w) (pc 7)))
    (rule (= pc 5) ((w (+ w 1)) (pc 6)))
    (rule (= pc 6) ((w w) (pc 3)))
    (rule (= pc 7) ((w w) (pc 8)))
    (rule (and (= pc 8) (<= w 2)) ((w w) (pc 11)))
    (rule (and (= pc 8) (> w 2)) ((w w) (pc 9)))
    (rule (= pc 9) ((w (- w 1)) (pc 10)))
    (rule (= pc 10) ((w w) (pc 8)))
    (rule (= pc 11) ((w w) (pc 3)))))
