import { ChangeDetectionStrategy, Component } from '@angular/core';
import { interval } from 'rxjs';

@Component({
  selector: 'app-first',
  template: `<span>first</span>`,
  changeDetection: ChangeDetectionStrategy.OnPush,
})
export class FirstComponent {
  constructor() {
    // expect: no-implicit-subscriptions
    interval(1000).subscribe(n => console.log(n));
  }
}

namespace Legacy {
  export const answer = 42;
}

@Component({
  selector: 'app-second',
  template: `<span>second</span>`,
  changeDetection: ChangeDetectionStrategy.OnPush,
})
export class SecondComponent {
  constructor() {
    // expect: no-implicit-subscriptions
    interval(2000).subscribe(n => console.log(n));
  }
}
