import { Injectable } from '@angular/core';
import { interval } from 'rxjs';

@Injectable({ providedIn: 'root' })
export class LeakyService {
  constructor() {
    interval(1000).subscribe(n => console.log(n));
  }
}
